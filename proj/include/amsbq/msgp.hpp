#ifndef AMSBQ_MSGP_HPP
#define AMSBQ_MSGP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "amsbq/kernels.hpp"

namespace amsbq {

/// One source-location-evaluation observation; sources are 1-based and
/// source 1 is the integrand of interest.
struct ObservationTriplet {
  int source = 1;
  Point x;
  double y = 0.0;
};

struct Dataset {
  std::vector<ObservationTriplet> triplets;

  int size() const { return static_cast<int>(triplets.size()); }
  bool empty() const { return triplets.empty(); }
  int dim() const { return triplets.empty() ? 0 : static_cast<int>(triplets.front().x.size()); }

  void append(const ObservationTriplet& t);
  void append(int source, const Point& x, double y) { append(ObservationTriplet{source, x, y}); }

  /// Number of observations of the given source.
  int count_source(int source) const;
};

struct Hyperparams {
  double lengthscale = 1.0;
  Eigen::MatrixXd W;          // L x R
  Eigen::VectorXd eta;        // L, positive
  Eigen::VectorXd noise_var;  // L, per-source sigma_l^2 >= 0

  int num_sources() const { return static_cast<int>(eta.size()); }
  int rank() const { return static_cast<int>(W.cols()); }
  Eigen::MatrixXd coregionalization() const;
  IcmKernel kernel() const;
};

struct GammaPrior {
  double shape = 2.0;
  double scale = 0.05;

  static GammaPrior from_mode(double mode, double shape);
  double mode() const { return shape > 1.0 ? (shape - 1.0) * scale : 0.0; }
  double log_density(double x) const;
  double d_log_density(double x) const;  // d/dx
};

/// Per-source observation noise: either pinned to `value` or learned with a
/// log-normal prior centered at log(value).
struct NoiseSpec {
  bool fixed = true;
  double value = 0.0;
};

/// Priors over the coregionalization factors: Gaussian on each W entry,
/// log-normal on each eta.
struct BPrior {
  Eigen::MatrixXd w_mean;        // L x R
  double w_scale = 0.5;
  Eigen::VectorXd log_eta_mean;  // L
  double log_eta_scale = 0.5;
  bool fallback = false;  // set when empirical Bayes had too little data

  static BPrior weakly_informative(int num_sources, int rank, double y_var);
};

struct PriorSpec {
  GammaPrior lengthscale;
  BPrior b;
  std::vector<NoiseSpec> noise;

  int num_sources() const { return static_cast<int>(noise.size()); }
  int rank() const { return static_cast<int>(b.w_mean.cols()); }

  /// Hyperparameters at the prior centers (lengthscale at the gamma mode).
  Hyperparams center() const;
};

/// Raw Gram matrix G[i][j] = B_{l_i l_j} k(x_i, x_j) + delta_ij sigma_{l_i}^2,
/// without jitter.
Eigen::MatrixXd gram(const Dataset& data, const Hyperparams& hyper);

struct JitterPolicy {
  double initial_rel = 1e-10;  // times the mean diagonal
  double max_rel = 1e-4;
  double growth = 10.0;
};

/// Lower Cholesky factor of g + jitter*I, escalating jitter per the policy.
/// Throws IllConditionedError when the ladder is exhausted.
struct CholeskyResult {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& g, const JitterPolicy& policy = {});

/// Posterior state of the multi-source GP under a zero prior mean.
/// Single-writer: append/set_hyperparams are exclusive; the const queries may
/// run concurrently between writes.
class GpState {
 public:
  GpState(Dataset data, Hyperparams hyper, JitterPolicy policy = {});

  const Dataset& data() const { return data_; }
  const Hyperparams& hyper() const { return hyper_; }
  const IcmKernel& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  int size() const { return data_.size(); }

  /// Appends one observation with an incremental Cholesky update; falls back
  /// to full refactorization when the update is numerically unsafe.
  void append(const ObservationTriplet& t);

  /// Replaces the hyperparameters and refactorizes.
  void set_hyperparams(Hyperparams hyper);

  struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
  };
  MeanVar posterior(int source, const Point& x) const;

  /// Posterior cross-covariance matrix k_{ll'|D}(X, X') for point sets.
  Eigen::MatrixXd posterior_cross_cov(int l, int lp, const std::vector<Point>& xs,
                                      const std::vector<Point>& xps) const;

  /// Prior covariance vector between the data and one (source, x) pair.
  Eigen::VectorXd cross_vector(int source, const Point& x) const;

  /// Solves L v = rhs with the stored factor.
  Eigen::VectorXd solve_lower(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve_lower_matrix(const Eigen::MatrixXd& rhs) const;
  /// Solves G v = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  const Eigen::VectorXd& alpha() const { return alpha_; }  // G^{-1} y

 private:
  void refactorize();

  Dataset data_;
  Hyperparams hyper_;
  IcmKernel kernel_;
  JitterPolicy policy_;
  Eigen::MatrixXd chol_lower_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

/// GP log marginal likelihood plus log prior densities (lengthscale, W, eta,
/// and any learned noise). Returns -infinity for a Gram matrix that stays
/// non-positive-definite through the whole jitter ladder.
double log_map_objective(const Dataset& data, const Hyperparams& hyper, const PriorSpec& priors);

/// The same objective in the optimizer's packed coordinates
/// [log lengthscale, W row-major, log eta, log learned-noise], with the
/// analytic gradient when `grad` is non-null.
double log_map_objective_packed(const Dataset& data, const Eigen::VectorXd& theta,
                                const PriorSpec& priors, Eigen::VectorXd* grad);
Eigen::VectorXd pack_hyperparams(const Hyperparams& hyper, const PriorSpec& priors);
Hyperparams unpack_hyperparams(const Eigen::VectorXd& theta, const PriorSpec& priors);

struct FitOptions {
  int restarts = 5;
  std::uint64_t seed = 0;
  int max_iterations = 120;
  const Hyperparams* warm_start = nullptr;  // used as the first restart
};

struct FitResult {
  Hyperparams hyper;
  double objective = 0.0;
  bool all_restarts_failed = false;
};

/// Restart-best MAP estimate of the hyperparameters; deterministic given the
/// seed. When every restart fails the prior center (or warm start) is kept
/// and the failure is flagged.
FitResult fit(const Dataset& data, const PriorSpec& priors, const FitOptions& options = {});

/// Centers the W/eta priors at a MAP fit to the initial data (empirical
/// Bayes). Falls back to a weakly-informative prior, flagged, when some
/// source has no observations or fewer than two points exist in total.
BPrior empirical_bayes_b_prior(const Dataset& initial, int num_sources, int rank,
                               const GammaPrior& lengthscale_prior,
                               const std::vector<NoiseSpec>& noise, std::uint64_t seed);

}  // namespace amsbq

#endif
