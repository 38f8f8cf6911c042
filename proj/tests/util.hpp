#ifndef AMSBQ_TESTS_UTIL_HPP
#define AMSBQ_TESTS_UTIL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "amsbq/kernels.hpp"

namespace testutil {

inline amsbq::Point pt(double x) {
  amsbq::Point p(1);
  p << x;
  return p;
}

inline amsbq::Point pt(double x, double y) {
  amsbq::Point p(2);
  p << x, y;
  return p;
}

/// ICM kernel realizing a given coregionalization matrix exactly (eta = 0,
/// W the Cholesky factor).
inline amsbq::IcmKernel make_icm(const Eigen::MatrixXd& b, double lengthscale) {
  amsbq::IcmKernel kernel;
  kernel.base.lengthscale = lengthscale;
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  kernel.W = llt.matrixL();
  kernel.eta = Eigen::VectorXd::Zero(b.rows());
  return kernel;
}

}  // namespace testutil

#endif
