#include "amsbq/quadrature.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <string>

#include "amsbq/errors.hpp"

namespace amsbq {

namespace {

double clamp_rho2(double raw) {
  if (raw < -1e-6 || raw > 1.0 + 1e-6) {
    throw DiagnosticsError("rho^2 = " + std::to_string(raw) +
                           " is outside [0,1] by more than round-off");
  }
  if (raw < 0.0) return 0.0;
  if (raw > 1.0) return 1.0;
  return raw;
}

}  // namespace

IntegralContext::IntegralContext(const GpState& state, const IntegrationMeasure& pi)
    : state_(&state), pi_(&pi) {
  const int n = state.size();
  initial_error_ = initial_error(state.kernel(), pi);
  kernel_means_.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& t = state.data().triplets[i];
    kernel_means_(i) = kernel_mean(1, t.source, t.x, state.kernel(), pi);
  }
  if (n > 0) {
    g_inv_km_ = state.solve(kernel_means_);
    posterior_.mean = kernel_means_.dot(state.alpha());
    posterior_.variance = initial_error_ - kernel_means_.dot(g_inv_km_);
  } else {
    g_inv_km_.resize(0);
    posterior_.mean = 0.0;
    posterior_.variance = initial_error_;
  }
  if (posterior_.variance < kIntegralVarianceFloor) {
    posterior_.variance = kIntegralVarianceFloor;
  }
}

double IntegralContext::rho_squared(int source, const Point& x) const {
  const GpState& s = *state_;
  const double km_prior = kernel_mean(1, source, x, s.kernel(), *pi_);
  double km_post = km_prior;
  double var_post = s.kernel().eval(source, source, x, x);
  if (s.size() > 0) {
    const Eigen::VectorXd k = s.cross_vector(source, x);
    km_post -= g_inv_km_.dot(k);
    var_post -= s.solve_lower(k).squaredNorm();
  }
  const double noise = s.hyper().noise_var(source - 1);
  double v = std::max(var_post, 0.0) + noise + s.jitter() + 1e-300;
  const double raw = km_post * km_post / (v * posterior_.variance);
  return clamp_rho2(raw);
}

double IntegralContext::rho_squared(const CandidateBatch& candidates) const {
  const int m = candidates.size();
  if (m == 0) throw std::invalid_argument("rho_squared: empty candidate batch");
  if (m == 1) return rho_squared(candidates.sources[0], candidates.locations[0]);

  const GpState& s = *state_;
  const int n = s.size();
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      if (candidates.sources[j] == candidates.sources[k] &&
          candidates.locations[j] == candidates.locations[k] &&
          s.hyper().noise_var(candidates.sources[j] - 1) == 0.0) {
        throw DegenerateCandidateError(
            "candidate batch lists the same noiseless (source, location) pair twice");
      }
    }
  }
  Eigen::VectorXd km_post(m);
  Eigen::MatrixXd cross(n, m);
  for (int j = 0; j < m; ++j) {
    const int lj = candidates.sources[j];
    const Point& xj = candidates.locations[j];
    km_post(j) = kernel_mean(1, lj, xj, s.kernel(), *pi_);
    if (n > 0) cross.col(j) = s.cross_vector(lj, xj);
  }
  Eigen::MatrixXd v(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k <= j; ++k) {
      double prior = s.kernel().eval(candidates.sources[j], candidates.sources[k],
                                     candidates.locations[j], candidates.locations[k]);
      v(j, k) = v(k, j) = prior;
    }
  }
  if (n > 0) {
    const Eigen::MatrixXd half = s.solve_lower_matrix(cross);
    v -= half.transpose() * half;
    km_post -= cross.transpose() * g_inv_km_;
  }
  for (int j = 0; j < m; ++j) {
    v(j, j) += s.hyper().noise_var(candidates.sources[j] - 1) + s.jitter();
  }

  // Jitter ladder for the candidate block, scaled like the state factor.
  const double scale = std::max(v.diagonal().mean(), 1e-300);
  double extra = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::MatrixXd work = v;
    work.diagonal().array() += extra;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd w = llt.matrixL().solve(km_post);
      const double raw = w.squaredNorm() / posterior_.variance;
      if (!std::isfinite(raw)) {
        throw DegenerateCandidateError("candidate covariance solve produced a non-finite rho^2");
      }
      return clamp_rho2(raw);
    }
    extra = (extra == 0.0) ? 1e-14 * scale : extra * 10.0;
    if (extra > 1e-4 * scale) break;
  }
  throw DegenerateCandidateError(
      "candidate batch covariance is singular (repeated noiseless points?)");
}

IntegralPosterior integral_posterior(const GpState& state, const IntegrationMeasure& pi) {
  return IntegralContext(state, pi).posterior();
}

double rho_squared(const GpState& state, const CandidateBatch& candidates,
                   const IntegrationMeasure& pi, const IntegralPosterior& z) {
  IntegralContext ctx(state, pi);
  (void)z;
  return ctx.rho_squared(candidates);
}

double variance_reduction(const GpState& state, const CandidateBatch& candidates,
                          const IntegrationMeasure& pi) {
  const double before = IntegralContext(state, pi).posterior().variance;
  GpState conditioned = state;
  for (int j = 0; j < candidates.size(); ++j) {
    // The observed value is irrelevant for the variance; zero stands in.
    conditioned.append(ObservationTriplet{candidates.sources[j], candidates.locations[j], 0.0});
  }
  const double after = IntegralContext(conditioned, pi).posterior().variance;
  return before - after;
}

}  // namespace amsbq
