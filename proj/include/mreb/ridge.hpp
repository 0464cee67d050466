#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "mreb/errors.hpp"
#include "mreb/moments.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Joint posterior mode of (beta, alpha): beta unpenalized, alpha shrunk
/// toward a prior location.
struct RidgeMode {
  double beta = 0.0;
  Vector alpha;
};

namespace detail {

// Solves the (J+1) x (J+1) normal equations of
//   ||Y - d_hat b - Z a||^2 + sigma2_eta * sum_j (a_j - mean_j)^2 / var_j
// The system matrix is the bordered Gram block with the per-coordinate ridge
// sigma2_eta / var_j added on the alpha diagonal; it is positive definite
// whenever d_hat has positive norm.
inline RidgeMode solve_penalized_block(const CrossMoments& m, const Vector& prior_mean,
                                       const Vector& prior_var, double sigma2_eta) {
  const Index J = m.J;
  Matrix system(J + 1, J + 1);
  system(0, 0) = m.DtD;
  system.block(0, 1, 1, J) = m.ZtD.transpose();
  system.block(1, 0, J, 1) = m.ZtD;
  system.block(1, 1, J, J) = m.ZtZ;
  Vector rhs(J + 1);
  rhs[0] = m.DtY;
  rhs.tail(J) = m.ZtY;
  for (Index j = 0; j < J; ++j) {
    system(1 + j, 1 + j) += sigma2_eta / prior_var[j];
    rhs[1 + j] += sigma2_eta * prior_mean[j] / prior_var[j];
  }

  const Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge mode: singular block system");
  }
  const Vector solution = llt.solve(rhs);
  if (!solution.allFinite()) {
    throw NumericalError("ridge mode: non-finite solution");
  }
  RidgeMode mode;
  mode.beta = solution[0];
  mode.alpha = solution.tail(J);
  return mode;
}

}  // namespace detail

/// Posterior mode under the common-location Gaussian prior on alpha: the
/// exact minimizer of ||Y - d_hat b - Z a||^2 + (sigma2_eta/tau2) ||a - mu||^2.
inline RidgeMode ridge_mode_single(const CrossMoments& m, double mu_alpha, double tau2,
                                   double sigma2_eta) {
  if (!(tau2 > 0.0) || !(sigma2_eta > 0.0)) {
    throw NumericalError("ridge mode: tau2 and sigma2_eta must be positive");
  }
  return detail::solve_penalized_block(m, Vector::Constant(m.J, mu_alpha),
                                       Vector::Constant(m.J, tau2), sigma2_eta);
}

inline RidgeMode ridge_mode_single(const IndividualDataset& data, const FirstStageFit& fit,
                                   double mu_alpha, double tau2, double sigma2_eta) {
  return ridge_mode_single(cross_moments(data, fit), mu_alpha, tau2, sigma2_eta);
}

/// Per-coordinate slab/spike prior variances: tau2 for selected coordinates,
/// nu0 * tau2 for the rest. Computed with a branch so the selected case is
/// exactly tau2.
inline Vector mixture_prior_var(const IntVector& xi, double tau2, double nu0) {
  Vector var(xi.size());
  for (Index j = 0; j < xi.size(); ++j) var[j] = (xi[j] != 0 ? tau2 : nu0 * tau2);
  return var;
}

/// Prior locations under the mixture: mu_alpha where selected, 0 at the spike.
inline Vector mixture_prior_mean(const IntVector& xi, double mu_alpha) {
  Vector mean(xi.size());
  for (Index j = 0; j < xi.size(); ++j) mean[j] = (xi[j] != 0 ? mu_alpha : 0.0);
  return mean;
}

/// Posterior mode under the spike-and-slab prior with selection vector xi:
/// coordinates with xi_j = 1 are shrunk toward mu_alpha at strength
/// sigma2_eta/tau2, the rest toward 0 at strength sigma2_eta/(nu0 tau2).
inline RidgeMode ridge_mode_mixture(const CrossMoments& m, double mu_alpha, const IntVector& xi,
                                    double tau2, double sigma2_eta, double nu0) {
  if (!(tau2 > 0.0) || !(sigma2_eta > 0.0)) {
    throw NumericalError("ridge mode: tau2 and sigma2_eta must be positive");
  }
  if (!(nu0 > 0.0 && nu0 < 1.0)) {
    throw NumericalError("ridge mode: nu0 must lie in (0, 1)");
  }
  if (xi.size() != m.J) throw NumericalError("ridge mode: xi length mismatch");
  for (Index j = 0; j < xi.size(); ++j) {
    if (xi[j] != 0 && xi[j] != 1) throw NumericalError("ridge mode: xi entries must be 0 or 1");
  }
  return detail::solve_penalized_block(m, mixture_prior_mean(xi, mu_alpha),
                                       mixture_prior_var(xi, tau2, nu0), sigma2_eta);
}

inline RidgeMode ridge_mode_mixture(const IndividualDataset& data, const FirstStageFit& fit,
                                    double mu_alpha, const IntVector& xi, double tau2,
                                    double sigma2_eta, double nu0) {
  return ridge_mode_mixture(cross_moments(data, fit), mu_alpha, xi, tau2, sigma2_eta, nu0);
}

/// Value of the penalized objective at (beta, alpha); used by callers probing
/// optimality.
inline double penalized_objective_single(const CrossMoments& m, double mu_alpha, double tau2,
                                         double sigma2_eta, double beta, const Vector& alpha) {
  const Vector dev = alpha.array() - mu_alpha;
  return residual_norm2(m, beta, alpha) + sigma2_eta / tau2 * dev.squaredNorm();
}

inline double penalized_objective_mixture(const CrossMoments& m, double mu_alpha,
                                          const IntVector& xi, double tau2, double sigma2_eta,
                                          double nu0, double beta, const Vector& alpha) {
  const Vector mean = mixture_prior_mean(xi, mu_alpha);
  const Vector var = mixture_prior_var(xi, tau2, nu0);
  double penalty = 0.0;
  for (Index j = 0; j < alpha.size(); ++j) {
    const double dev = alpha[j] - mean[j];
    penalty += sigma2_eta * dev * dev / var[j];
  }
  return residual_norm2(m, beta, alpha) + penalty;
}

}  // namespace mreb
