#ifndef AMSBQ_GAUSSMIX_HPP
#define AMSBQ_GAUSSMIX_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "amsbq/kernels.hpp"

namespace amsbq {

struct GaussBasis {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;      // diag(kappa) + u u^T
  double weight = 0.0;      // z_k, may be negative
  Eigen::Matrix2d cov_inv;  // cached
  double norm = 0.0;        // (2 pi |cov|)^{-1/2}
};

/// Three correlated bivariate sources on [-3,3]^2, each a linear
/// combination of K = 20 Gaussian basis functions. Source 1 is sampled
/// fresh; sources 2 and 3 are consecutive perturbations (means shifted up
/// and right by Uniform[0, 0.3], covariance diagonals widened by
/// Uniform[0, 0.2], weights jittered by Normal(0, 0.1 |z| + 0.05)).
struct GaussMixtureSources {
  std::vector<std::vector<GaussBasis>> sources;  // [3][K]

  int num_sources() const { return static_cast<int>(sources.size()); }
};

inline constexpr int kGaussMixtureBases = 20;

GaussMixtureSources gauss_mixture_generate(std::uint64_t seed);

double gauss_mixture_eval(const GaussMixtureSources& sources, int source, const Point& x);

}  // namespace amsbq

#endif
