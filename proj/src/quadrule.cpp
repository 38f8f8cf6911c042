#include "amsbq/quadrule.hpp"

#include <cmath>
#include <stdexcept>

namespace amsbq {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  std::vector<double> nodes(n), weights(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  return {nodes, weights};
}

double integrate_gl(const std::function<double(double)>& f, double lo, double hi, int n) {
  const auto [nodes, weights] = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double halfw = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += weights[i] * f(mid + halfw * nodes[i]);
  }
  return acc * halfw;
}

double integrate_gl_mean(const std::function<double(const Point&)>& f,
                         const IntegrationMeasure& pi, int n_per_dim) {
  const int dim = pi.dim();
  const auto [nodes, weights] = gauss_legendre(n_per_dim);
  if (dim == 1) {
    const double mid = 0.5 * (pi.low(0) + pi.high(0));
    const double halfw = 0.5 * (pi.high(0) - pi.low(0));
    double acc = 0.0;
    Point x(1);
    for (int i = 0; i < n_per_dim; ++i) {
      x(0) = mid + halfw * nodes[i];
      acc += weights[i] * f(x);
    }
    return 0.5 * acc;  // weights sum to 2
  }
  if (dim == 2) {
    const double mid0 = 0.5 * (pi.low(0) + pi.high(0)), half0 = 0.5 * (pi.high(0) - pi.low(0));
    const double mid1 = 0.5 * (pi.low(1) + pi.high(1)), half1 = 0.5 * (pi.high(1) - pi.low(1));
    double acc = 0.0;
    Point x(2);
    for (int i = 0; i < n_per_dim; ++i) {
      x(0) = mid0 + half0 * nodes[i];
      double row = 0.0;
      for (int j = 0; j < n_per_dim; ++j) {
        x(1) = mid1 + half1 * nodes[j];
        row += weights[j] * f(x);
      }
      acc += weights[i] * row;
    }
    return 0.25 * acc;
  }
  throw std::invalid_argument("integrate_gl_mean: only dim 1 and 2 supported");
}

}  // namespace amsbq
