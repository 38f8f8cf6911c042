#ifndef AMSBQ_QUADRATURE_HPP
#define AMSBQ_QUADRATURE_HPP

#include <Eigen/Core>
#include <vector>

#include "amsbq/kernels.hpp"
#include "amsbq/msgp.hpp"

namespace amsbq {

/// Gaussian belief over the integral of source 1.
struct IntegralPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Proposed (source, location) pairs to be scored jointly.
struct CandidateBatch {
  std::vector<int> sources;
  std::vector<Point> locations;

  int size() const { return static_cast<int>(sources.size()); }
  static CandidateBatch single(int source, const Point& x) {
    return CandidateBatch{{source}, {x}};
  }
};

/// Floor on the integral posterior variance; keeps the correlation
/// denominator away from zero late in a run.
inline constexpr double kIntegralVarianceFloor = 1e-14;

/// Per-state cache of the integral-related quantities: the kernel-mean
/// vector over the data, its Gram solve, and the integral posterior.
/// Read-only over the state; cheap to query per candidate.
class IntegralContext {
 public:
  IntegralContext(const GpState& state, const IntegrationMeasure& pi);

  const GpState& state() const { return *state_; }
  const IntegrationMeasure& measure() const { return *pi_; }
  const IntegralPosterior& posterior() const { return posterior_; }
  double prior_variance() const { return initial_error_; }

  /// Fraction of the current integral variance explained by the batch,
  /// clamped to [0,1]. Values outside by more than 1e-6 raise
  /// DiagnosticsError; a singular candidate covariance raises
  /// DegenerateCandidateError.
  double rho_squared(const CandidateBatch& candidates) const;
  double rho_squared(int source, const Point& x) const;

 private:
  const GpState* state_;
  const IntegrationMeasure* pi_;
  Eigen::VectorXd kernel_means_;  // <k_{1 l_i}(., x_i)> over the data
  Eigen::VectorXd g_inv_km_;
  double initial_error_ = 0.0;
  IntegralPosterior posterior_;
};

IntegralPosterior integral_posterior(const GpState& state, const IntegrationMeasure& pi);

double rho_squared(const GpState& state, const CandidateBatch& candidates,
                   const IntegrationMeasure& pi, const IntegralPosterior& z);

/// V[Z|D] - V[Z|D + batch], computed by actually conditioning on the batch
/// (the observed values do not enter the variance).
double variance_reduction(const GpState& state, const CandidateBatch& candidates,
                          const IntegrationMeasure& pi);

}  // namespace amsbq

#endif
