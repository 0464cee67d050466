#pragma once

#include <limits>

#include <Eigen/Dense>

#include "mreb/first_stage.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Cross-products that are sufficient statistics for every estimator in the
/// library. With individual data they are Gram blocks of (Z, d_hat, Y). With
/// summary data the same blocks are rebuilt from per-variant statistics; the
/// residual variance is then already absorbed into them, so sigma2_eta is
/// pinned at 1 and never resampled.
struct CrossMoments {
  Matrix ZtZ;
  Vector ZtD;      // Z^T d_hat
  Vector ZtY;
  double DtD = 0;  // d_hat^T d_hat
  double DtY = 0;
  double YtY = 0;  // NaN in summary mode (never needed there)
  Index n = 0;     // 0 in summary mode
  Index J = 0;
  bool sigma_eta_absorbed = false;
};

inline CrossMoments cross_moments(const IndividualDataset& data, const FirstStageFit& fit) {
  CrossMoments m;
  m.ZtZ = data.Z.transpose() * data.Z;
  m.ZtD = data.Z.transpose() * fit.d_hat;
  m.ZtY = data.Z.transpose() * data.Y;
  m.DtD = fit.d_hat_norm2;
  m.DtY = fit.d_hat.dot(data.Y);
  m.YtY = data.Y.squaredNorm();
  m.n = data.n;
  m.J = data.J;
  m.sigma_eta_absorbed = false;
  return m;
}

/// Summary-statistics rebuild: with a diagonal instrument Gram matrix,
///   Z^T Z / sigma2_eta       -> diag(1 / sigma2_omega)
///   Z^T d_hat / sigma2_eta   -> gamma2 / sigma2_omega
///   Z^T Y / sigma2_eta       -> omega / sigma2_omega
///   d_hat^T d_hat / s2       -> sum gamma2^2 / sigma2_omega
///   d_hat^T Y / s2           -> sum gamma2 * omega / sigma2_omega
inline CrossMoments cross_moments(const SummaryDataset& summary) {
  const Index J = summary.J();
  const Vector inv_var = summary.sigma2_omega.cwiseInverse();
  CrossMoments m;
  m.ZtZ = inv_var.asDiagonal();
  m.ZtD = summary.gamma2.cwiseProduct(inv_var);
  m.ZtY = summary.omega.cwiseProduct(inv_var);
  m.DtD = summary.gamma2.cwiseProduct(summary.gamma2).dot(inv_var);
  m.DtY = summary.gamma2.cwiseProduct(summary.omega).dot(inv_var);
  m.YtY = std::numeric_limits<double>::quiet_NaN();
  m.n = 0;
  m.J = J;
  m.sigma_eta_absorbed = true;
  return m;
}

/// Residual sum of squares ||Y - d_hat * beta - Z * alpha||^2 expressed
/// through the cross-products. Clamped at zero against cancellation.
inline double residual_norm2(const CrossMoments& m, double beta, const Vector& alpha) {
  const double rss = m.YtY + beta * beta * m.DtD + alpha.dot(m.ZtZ * alpha) -
                     2.0 * beta * m.DtY - 2.0 * alpha.dot(m.ZtY) +
                     2.0 * beta * m.ZtD.dot(alpha);
  return rss < 0.0 ? 0.0 : rss;
}

}  // namespace mreb
