#include "amsbq/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amsbq {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Gradient components that push against an active bound are frozen.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd pg = g;
  for (int i = 0; i < x.size(); ++i) {
    const double width = hi(i) - lo(i);
    const double edge = 1e-12 * std::max(width, 1.0);
    if (x(i) <= lo(i) + edge && g(i) > 0.0) pg(i) = 0.0;  // minimizing: g>0 wants x down
    if (x(i) >= hi(i) - edge && g(i) < 0.0) pg(i) = 0.0;
  }
  return pg;
}

}  // namespace

BoxOptimResult maximize_box(const GradObjective& objective, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& low, const Eigen::VectorXd& high,
                            const BoxOptimOptions& options) {
  const int n = static_cast<int>(x0.size());
  // Internally minimizes f = -objective.
  auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    double v = objective(x, grad);
    if (grad != nullptr) *grad = -*grad;
    return -v;
  };

  BoxOptimResult result;
  Eigen::VectorXd x = project(x0, low, high);
  Eigen::VectorXd g(n);
  double fx = eval(x, &g);
  if (!std::isfinite(fx)) {
    // Hopeless start; report it as-is so multi-start callers can discard it.
    result.x = x;
    result.value = -fx;
    return result;
  }

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Eigen::VectorXd pg = projected_gradient(x, g, low, high);
    if (pg.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd direction = -(h_inv * g);
    for (int i = 0; i < n; ++i) {
      const double width = high(i) - low(i);
      const double edge = 1e-12 * std::max(width, 1.0);
      if (x(i) <= low(i) + edge && direction(i) < 0.0) direction(i) = 0.0;
      if (x(i) >= high(i) - edge && direction(i) > 0.0) direction(i) = 0.0;
    }
    if (direction.dot(g) >= 0.0 || direction.lpNorm<Eigen::Infinity>() == 0.0) {
      h_inv.setIdentity();
      direction = -pg;
    }

    double step = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = project(x + step * direction, low, high);
      Eigen::VectorXd actual = x_new - x;
      if (actual.lpNorm<Eigen::Infinity>() == 0.0) break;
      f_new = eval(x_new, nullptr);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * g.dot(actual)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.converged = true;  // no descent step left at this resolution
      break;
    }

    Eigen::VectorXd g_new(n);
    const double f_check = eval(x_new, &g_new);
    (void)f_check;

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      Eigen::MatrixXd outer_sy = s * y.transpose();
      h_inv = (Eigen::MatrixXd::Identity(n, n) - rho * outer_sy) * h_inv *
                  (Eigen::MatrixXd::Identity(n, n) - rho * outer_sy.transpose()) +
              rho * s * s.transpose();
    } else {
      h_inv.setIdentity();
    }

    const double moved = s.lpNorm<Eigen::Infinity>();
    x = x_new;
    g = g_new;
    fx = f_new;
    if (moved < options.step_tol) {
      result.converged = true;
      break;
    }
  }

  result.x = x;
  result.value = -fx;
  result.iterations = iter;
  return result;
}

BoxOptimResult maximize_box_fd(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& x0, const Eigen::VectorXd& low,
                               const Eigen::VectorXd& high, const BoxOptimOptions& options) {
  auto with_fd = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const double v = objective(x);
    if (grad != nullptr) {
      grad->resize(x.size());
      for (int i = 0; i < x.size(); ++i) {
        const double h = options.fd_step_rel * std::max(high(i) - low(i), 1e-12);
        double up = std::min(x(i) + h, high(i));
        double dn = std::max(x(i) - h, low(i));
        Eigen::VectorXd xe = x;
        xe(i) = up;
        const double fu = objective(xe);
        xe(i) = dn;
        const double fd = objective(xe);
        (*grad)(i) = (up > dn) ? (fu - fd) / (up - dn) : 0.0;
      }
    }
    return v;
  };
  return maximize_box(with_fd, x0, low, high, options);
}

}  // namespace amsbq
