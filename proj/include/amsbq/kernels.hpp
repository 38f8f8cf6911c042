#ifndef AMSBQ_KERNELS_HPP
#define AMSBQ_KERNELS_HPP

#include <Eigen/Core>

namespace amsbq {

using Point = Eigen::VectorXd;

/// Squared-exponential kernel exp(-|x - x'|^2 / (2 lambda^2)), unit output scale.
struct RbfKernel {
  double lengthscale = 1.0;

  double eval(const Point& x, const Point& xp) const;
};

double rbf_eval(const Point& x, const Point& xp, double lengthscale);

/// Intrinsic coregionalization kernel: k_{ll'}(x,x') = B_{ll'} * rbf(x,x')
/// with B = W W^T + diag(eta), L sources, W of rank R <= L.
struct IcmKernel {
  RbfKernel base;
  Eigen::MatrixXd W;     // L x R
  Eigen::VectorXd eta;   // L, entrywise positive

  int num_sources() const { return static_cast<int>(eta.size()); }
  Eigen::MatrixXd coregionalization() const;  // B

  // Source indices are 1-based, matching the observation triplets.
  double eval(int l, int lp, const Point& x, const Point& xp) const;
};

double icm_eval(int l, int lp, const Point& x, const Point& xp, const IcmKernel& kernel);

/// Uniform probability measure on a finite axis-aligned box.
struct IntegrationMeasure {
  Eigen::VectorXd low;
  Eigen::VectorXd high;

  static IntegrationMeasure uniform_box(const Eigen::VectorXd& low, const Eigen::VectorXd& high);
  static IntegrationMeasure uniform_box(double low, double high);

  int dim() const { return static_cast<int>(low.size()); }
  double volume() const;
  bool contains(const Point& x) const;
};

// One-dimensional building blocks, normalized by the box width:
//   rbf_mean_1d      = 1/(b-a) * int_a^b exp(-(x-t)^2/(2 l^2)) dx
//                    = l*sqrt(pi/2)/(b-a) * [erf((b-t)/(sqrt2 l)) - erf((a-t)/(sqrt2 l))]
//   rbf_double_mean_1d = 1/(b-a)^2 * int int exp(-(x-y)^2/(2 l^2)) dx dy
//                    = [2 w l sqrt(pi/2) erf(w/(sqrt2 l)) - 2 l^2 (1 - exp(-w^2/(2 l^2)))] / w^2
// erf comes from <cmath>; glibc's implementation is accurate to ~1 ulp,
// well inside the 1e-12 absolute requirement.
double rbf_mean_1d(double low, double high, double center, double lengthscale);
double rbf_double_mean_1d(double low, double high, double lengthscale);

/// <k_{ll'}(., x')> : the ICM kernel integrated once against the measure.
double kernel_mean(int l, int lp, const Point& xp, const IcmKernel& kernel,
                   const IntegrationMeasure& pi);

/// <<k_11>> : the prior variance of the integral of source 1.
double initial_error(const IcmKernel& kernel, const IntegrationMeasure& pi);

}  // namespace amsbq

#endif
