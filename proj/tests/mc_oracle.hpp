// Monte Carlo oracle for the integral posterior: draw GP posterior sample
// paths on a dense Gauss-Legendre grid, integrate each path with the
// quadrature rule, and compare the sample moments of those integrals
// against the closed-form posterior. Independent of the kernel-mean
// closed forms being checked.

#ifndef AMSBQ_TESTS_MC_ORACLE_HPP
#define AMSBQ_TESTS_MC_ORACLE_HPP

#include <Eigen/Cholesky>
#include <cmath>

#include "amsbq/msgp.hpp"
#include "amsbq/quadrature.hpp"
#include "amsbq/quadrule.hpp"
#include "amsbq/rng.hpp"

namespace testutil {

struct McCheck {
  double mean_mc = 0.0, mean_closed = 0.0, mean_tol = 0.0;
  double var_mc = 0.0, var_closed = 0.0, var_tol = 0.0;
  bool mean_ok = false, var_ok = false;
};

inline McCheck sample_path_check(const amsbq::GpState& state,
                                 const amsbq::IntegrationMeasure& pi, int nodes, int samples,
                                 std::uint64_t seed) {
  const auto [gl_nodes, gl_weights] = amsbq::gauss_legendre(nodes);
  const double mid = 0.5 * (pi.low(0) + pi.high(0));
  const double halfw = 0.5 * (pi.high(0) - pi.low(0));

  std::vector<amsbq::Point> grid(nodes);
  Eigen::VectorXd q(nodes), mu(nodes);
  for (int i = 0; i < nodes; ++i) {
    amsbq::Point x(1);
    x << mid + halfw * gl_nodes[i];
    grid[i] = x;
    q(i) = 0.5 * gl_weights[i];  // mean under the uniform measure
    mu(i) = state.posterior(1, x).mean;
  }
  Eigen::MatrixXd cov = state.posterior_cross_cov(1, 1, grid, grid);
  cov.diagonal().array() += 1e-12 * std::max(cov.diagonal().maxCoeff(), 1e-12);
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd lower = llt.matrixL();

  // Integral of the sample path mu + L xi is  q.mu + (L^T q).xi.
  const double base = q.dot(mu);
  const Eigen::VectorXd v = lower.transpose() * q;

  amsbq::Rng rng(seed);
  double acc = 0.0, acc2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    double z = base;
    for (int i = 0; i < nodes; ++i) z += v(i) * rng.normal();
    acc += z;
    acc2 += z * z;
  }
  const double mean_mc = acc / samples;
  const double var_mc = acc2 / samples - mean_mc * mean_mc;

  const amsbq::IntegralPosterior closed = amsbq::integral_posterior(state, pi);

  McCheck out;
  out.mean_mc = mean_mc;
  out.mean_closed = closed.mean;
  out.mean_tol = 3.0 * std::sqrt(var_mc / samples) + 1e-12;
  out.mean_ok = std::abs(mean_mc - closed.mean) <= out.mean_tol;
  out.var_mc = var_mc;
  out.var_closed = closed.variance;
  out.var_tol = 3.0 * var_mc * std::sqrt(2.0 / (samples - 1.0)) + 1e-12;
  out.var_ok = std::abs(var_mc - closed.variance) <= out.var_tol;
  return out;
}

}  // namespace testutil

#endif
