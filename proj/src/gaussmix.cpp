#include "amsbq/gaussmix.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "amsbq/rng.hpp"

namespace amsbq {

namespace {

void finalize(GaussBasis& basis) {
  const double det = basis.cov.determinant();
  basis.cov_inv = basis.cov.inverse();
  basis.norm = 1.0 / std::sqrt(2.0 * M_PI * det);
}

}  // namespace

GaussMixtureSources gauss_mixture_generate(std::uint64_t seed) {
  Rng rng(seed);
  GaussMixtureSources out;
  out.sources.resize(3);

  std::vector<GaussBasis>& primary = out.sources[0];
  primary.resize(kGaussMixtureBases);
  Rng draw = rng.split(1);
  for (auto& basis : primary) {
    basis.mean << draw.uniform(-3.0, 3.0), draw.uniform(-3.0, 3.0);
    Eigen::Vector2d u(draw.normal(), draw.normal());
    Eigen::Vector2d kappa(draw.uniform(), draw.uniform());
    basis.cov = kappa.asDiagonal();
    basis.cov += u * u.transpose();
    basis.weight = draw.normal();
    finalize(basis);
  }

  for (int l = 1; l < 3; ++l) {
    Rng perturb = rng.split(l + 1);
    out.sources[l] = out.sources[l - 1];
    for (auto& basis : out.sources[l]) {
      basis.mean(0) += perturb.uniform(0.0, 0.3);
      basis.mean(1) += perturb.uniform(0.0, 0.3);
      basis.cov(0, 0) += perturb.uniform(0.0, 0.2);
      basis.cov(1, 1) += perturb.uniform(0.0, 0.2);
      basis.weight += perturb.normal(0.0, 0.1 * std::abs(basis.weight) + 0.05);
      finalize(basis);
    }
  }
  return out;
}

double gauss_mixture_eval(const GaussMixtureSources& sources, int source, const Point& x) {
  if (source < 1 || source > sources.num_sources()) {
    throw std::out_of_range("gauss_mixture_eval: bad source index");
  }
  if (x.size() != 2) {
    throw std::invalid_argument("gauss_mixture_eval: point must be bivariate");
  }
  const Eigen::Vector2d p(x(0), x(1));
  double acc = 0.0;
  for (const auto& basis : sources.sources[source - 1]) {
    const Eigen::Vector2d d = p - basis.mean;
    acc += basis.weight * basis.norm * std::exp(-0.5 * d.dot(basis.cov_inv * d));
  }
  return acc;
}

}  // namespace amsbq
