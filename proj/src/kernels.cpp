#include "amsbq/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace amsbq {

namespace {

constexpr double kSqrtHalfPi = 1.2533141373155002512078826424;  // sqrt(pi/2)
constexpr double kInvSqrt2 = 0.7071067811865475244008443621;

void check_lengthscale(double lengthscale) {
  if (!(lengthscale > 0.0)) {
    throw std::invalid_argument("rbf kernel: lengthscale must be positive, got " +
                                std::to_string(lengthscale));
  }
}

void check_source(int l, int num_sources, const char* where) {
  if (l < 1 || l > num_sources) {
    throw std::out_of_range(std::string(where) + ": source index " + std::to_string(l) +
                            " outside 1.." + std::to_string(num_sources));
  }
}

}  // namespace

double rbf_eval(const Point& x, const Point& xp, double lengthscale) {
  check_lengthscale(lengthscale);
  if (x.size() != xp.size()) {
    throw std::invalid_argument("rbf kernel: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(xp.size()) + ")");
  }
  const double sq = (x - xp).squaredNorm();
  return std::exp(-sq / (2.0 * lengthscale * lengthscale));
}

double RbfKernel::eval(const Point& x, const Point& xp) const {
  return rbf_eval(x, xp, lengthscale);
}

Eigen::MatrixXd IcmKernel::coregionalization() const {
  Eigen::MatrixXd b = W * W.transpose();
  b.diagonal() += eta;
  return b;
}

double IcmKernel::eval(int l, int lp, const Point& x, const Point& xp) const {
  return icm_eval(l, lp, x, xp, *this);
}

double icm_eval(int l, int lp, const Point& x, const Point& xp, const IcmKernel& kernel) {
  const int num_sources = kernel.num_sources();
  check_source(l, num_sources, "icm_eval");
  check_source(lp, num_sources, "icm_eval");
  const double b_llp = kernel.W.row(l - 1).dot(kernel.W.row(lp - 1)) +
                       (l == lp ? kernel.eta(l - 1) : 0.0);
  return b_llp * rbf_eval(x, xp, kernel.base.lengthscale);
}

IntegrationMeasure IntegrationMeasure::uniform_box(const Eigen::VectorXd& low,
                                                   const Eigen::VectorXd& high) {
  if (low.size() != high.size() || low.size() == 0) {
    throw std::invalid_argument("integration measure: bounds must be non-empty and congruent");
  }
  for (int d = 0; d < low.size(); ++d) {
    if (!(low(d) < high(d)) || !std::isfinite(low(d)) || !std::isfinite(high(d))) {
      throw std::invalid_argument("integration measure: need finite low < high per dimension");
    }
  }
  IntegrationMeasure pi;
  pi.low = low;
  pi.high = high;
  return pi;
}

IntegrationMeasure IntegrationMeasure::uniform_box(double low, double high) {
  Eigen::VectorXd lo(1), hi(1);
  lo << low;
  hi << high;
  return uniform_box(lo, hi);
}

double IntegrationMeasure::volume() const { return (high - low).prod(); }

bool IntegrationMeasure::contains(const Point& x) const {
  if (x.size() != low.size()) return false;
  for (int d = 0; d < x.size(); ++d) {
    if (x(d) < low(d) || x(d) > high(d)) return false;
  }
  return true;
}

double rbf_mean_1d(double low, double high, double center, double lengthscale) {
  check_lengthscale(lengthscale);
  const double scale = kInvSqrt2 / lengthscale;
  return lengthscale * kSqrtHalfPi *
         (std::erf((high - center) * scale) - std::erf((low - center) * scale)) / (high - low);
}

double rbf_double_mean_1d(double low, double high, double lengthscale) {
  check_lengthscale(lengthscale);
  const double w = high - low;
  const double s = w * kInvSqrt2 / lengthscale;
  const double l2 = lengthscale * lengthscale;
  return (2.0 * w * lengthscale * kSqrtHalfPi * std::erf(s) - 2.0 * l2 * (1.0 - std::exp(-s * s))) /
         (w * w);
}

double kernel_mean(int l, int lp, const Point& xp, const IcmKernel& kernel,
                   const IntegrationMeasure& pi) {
  const int num_sources = kernel.num_sources();
  check_source(l, num_sources, "kernel_mean");
  check_source(lp, num_sources, "kernel_mean");
  if (xp.size() != pi.dim()) {
    throw std::invalid_argument("kernel_mean: point dimension does not match the measure");
  }
  const double b_llp = kernel.W.row(l - 1).dot(kernel.W.row(lp - 1)) +
                       (l == lp ? kernel.eta(l - 1) : 0.0);
  double prod = b_llp;
  for (int d = 0; d < pi.dim(); ++d) {
    prod *= rbf_mean_1d(pi.low(d), pi.high(d), xp(d), kernel.base.lengthscale);
  }
  return prod;
}

double initial_error(const IcmKernel& kernel, const IntegrationMeasure& pi) {
  const double b_11 = kernel.W.row(0).dot(kernel.W.row(0)) + kernel.eta(0);
  double prod = b_11;
  for (int d = 0; d < pi.dim(); ++d) {
    prod *= rbf_double_mean_1d(pi.low(d), pi.high(d), kernel.base.lengthscale);
  }
  return prod;
}

}  // namespace amsbq
