#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "mreb/errors.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Least-squares regression of the exposure on the instruments.
struct FirstStageFit {
  Vector gamma_hat;       // instrument strengths, length J
  Vector d_hat;           // fitted exposure Z * gamma_hat, length n
  double d_hat_norm2 = 0;  // squared norm of d_hat, strictly positive
};

constexpr double kRankTolerance = 1e-10;  // relative eigenvalue floor for inverses

/// Solves the instrument-exposure normal equations. The Gram matrix must be
/// well conditioned: its smallest eigenvalue has to exceed kRankTolerance
/// times the largest.
inline FirstStageFit first_stage(const IndividualDataset& data) {
  const Matrix gram = data.Z.transpose() * data.Z;
  const Eigen::SelfAdjointEigenSolver<Matrix> eigs(gram, Eigen::EigenvaluesOnly);
  const double lambda_min = eigs.eigenvalues().minCoeff();
  const double lambda_max = eigs.eigenvalues().maxCoeff();
  if (!(lambda_min > kRankTolerance * lambda_max) || !(lambda_max > 0.0)) {
    throw NumericalError("first stage: instrument Gram matrix is rank deficient (smallest eigenvalue " +
                         std::to_string(lambda_min) + " vs largest " + std::to_string(lambda_max) + ")");
  }

  FirstStageFit fit;
  fit.gamma_hat = Eigen::LLT<Matrix>(gram).solve(data.Z.transpose() * data.D);
  fit.d_hat = data.Z * fit.gamma_hat;
  fit.d_hat_norm2 = fit.d_hat.squaredNorm();
  if (!std::isfinite(fit.d_hat_norm2)) {
    throw NumericalError("first stage: non-finite fitted exposure");
  }
  if (!(fit.d_hat_norm2 > 0.0)) {
    throw NumericalError("first stage: fitted exposure has zero norm");
  }
  return fit;
}

/// Two-stage least squares: regresses the outcome on the fitted exposure.
inline double tsls(const IndividualDataset& data, const FirstStageFit& fit) {
  if (!(fit.d_hat_norm2 > 0.0)) {
    throw NumericalError("tsls: zero d_hat_norm2");
  }
  return fit.d_hat.dot(data.Y) / fit.d_hat_norm2;
}

}  // namespace mreb
