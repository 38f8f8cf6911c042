#ifndef AMSBQ_QUADRULE_HPP
#define AMSBQ_QUADRULE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "amsbq/kernels.hpp"

namespace amsbq {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on the
/// Legendre recurrence).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Integral of f over [lo, hi] with an n-node Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double lo, double hi, int n);

/// Mean of f under the uniform measure on the box, tensorized Gauss-Legendre
/// with n nodes per dimension (supports dim 1 and 2).
double integrate_gl_mean(const std::function<double(const Point&)>& f,
                         const IntegrationMeasure& pi, int n_per_dim);

}  // namespace amsbq

#endif
