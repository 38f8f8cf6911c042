#ifndef AMSBQ_OPTIM_HPP
#define AMSBQ_OPTIM_HPP

#include <Eigen/Core>
#include <functional>

namespace amsbq {

struct BoxOptimOptions {
  int max_iterations = 120;
  double gradient_tol = 1e-9;   // projected-gradient infinity norm
  double step_tol = 1e-13;      // stop when the accepted step is this small
  double fd_step_rel = 1e-6;    // finite-difference step, relative to box width
};

struct BoxOptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Objective with optional analytic gradient; `grad` is null when only the
/// value is needed.
using GradObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd* grad)>;

/// Maximizes the objective over the box [low, high] with a projected BFGS
/// iteration (gradient-projection active set, Armijo backtracking).
/// Deterministic; starts from the projection of x0.
BoxOptimResult maximize_box(const GradObjective& objective, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& low, const Eigen::VectorXd& high,
                            const BoxOptimOptions& options = {});

/// Same, with central finite differences standing in for the gradient.
BoxOptimResult maximize_box_fd(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& x0, const Eigen::VectorXd& low,
                               const Eigen::VectorXd& high, const BoxOptimOptions& options = {});

}  // namespace amsbq

#endif
