#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "mreb/errors.hpp"
#include "mreb/moments.hpp"
#include "mreb/ridge.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Regularity constants of the shrinkage estimators plus, when the true
/// pleiotropic effects and realized residuals are available (simulation),
/// the three terms of the deterministic error bound on beta_hat.
struct DiagnosticsReport {
  double c_star = std::numeric_limits<double>::quiet_NaN();
  double c_double_star = std::numeric_limits<double>::quiet_NaN();
  bool assumption_ok = false;
  // {shrinkage bias, projected noise, endogeneity}; absent on real data or
  // when the relevant constant leaves (0, 1).
  std::optional<std::array<double, 3>> bound_terms;
  std::optional<double> bound_total;
};

namespace detail {

// Largest eigenvalue of A B^{-1} for the rank-one projected Gram A and the
// penalized Gram B, evaluated on the symmetric similar form
// B^{-1/2} A B^{-1/2} so the spectrum is real by construction. The common
// 1/n factor of A and B cancels and is dropped.
inline double pair_constant(const CrossMoments& m, double sigma2_eta, const Vector& prior_var) {
  const Matrix penalized =
      m.ZtZ / sigma2_eta + Matrix(prior_var.cwiseInverse().asDiagonal());
  const Eigen::SelfAdjointEigenSolver<Matrix> eigs(penalized);
  if (eigs.info() != Eigen::Success || !(eigs.eigenvalues().minCoeff() > 0.0)) {
    throw NumericalError("diagnostics: penalized Gram matrix is not positive definite");
  }
  const Matrix inv_sqrt = eigs.operatorInverseSqrt();
  // A = (ZtD)(ZtD)^T / (DtD * sigma2_eta); fold the outer product through the
  // inverse square root so the similar form stays explicitly rank one.
  const Vector w = inv_sqrt * m.ZtD;
  return w.squaredNorm() / (m.DtD * sigma2_eta);
}

}  // namespace detail

/// c*: the constant of the common-location prior (prior variance tau2 on all
/// coordinates).
inline double regularity_constant_single(const CrossMoments& m, double tau2, double sigma2_eta) {
  if (!(tau2 > 0.0) || !(sigma2_eta > 0.0)) {
    throw NumericalError("diagnostics: tau2 and sigma2_eta must be positive");
  }
  return detail::pair_constant(m, sigma2_eta, Vector::Constant(m.J, tau2));
}

/// c**: the constant of the spike-and-slab prior at selection vector xi.
inline double regularity_constant_mixture(const CrossMoments& m, double tau2, double sigma2_eta,
                                          const IntVector& xi, double nu0) {
  if (!(tau2 > 0.0) || !(sigma2_eta > 0.0)) {
    throw NumericalError("diagnostics: tau2 and sigma2_eta must be positive");
  }
  if (!(nu0 > 0.0 && nu0 < 1.0)) throw NumericalError("diagnostics: nu0 must lie in (0, 1)");
  return detail::pair_constant(m, sigma2_eta, mixture_prior_var(xi, tau2, nu0));
}

/// Constants-only report from cross-products; this is what estimator results
/// carry for real data, where the bound terms are unobservable.
inline DiagnosticsReport constants_report(const CrossMoments& m, double tau2, double sigma2_eta,
                                          const IntVector* xi = nullptr, double nu0 = 0.0) {
  DiagnosticsReport report;
  report.c_star = regularity_constant_single(m, tau2, sigma2_eta);
  report.c_double_star =
      xi != nullptr ? regularity_constant_mixture(m, tau2, sigma2_eta, *xi, nu0) : report.c_star;
  const double relevant = xi != nullptr ? report.c_double_star : report.c_star;
  report.assumption_ok = relevant > 0.0 && relevant < 1.0;
  return report;
}

/// Full diagnostics. For mode == mixture, xi and nu0 select the prior
/// variance pattern; c_double_star falls back to c_star in single mode.
/// alpha_true and eta_hat (the realized residual Y - beta d_hat - Z alpha)
/// are only available in simulations; when both are given and the relevant
/// constant lies in (0, 1), the three bound terms are evaluated:
///   shrinkage   k |G^{-1}(alpha - mean)| / DtD
///   projection  k |Z^T P_perp eta_hat| / (s2 DtD)
///   endogeneity |d_hat^T eta_hat| / DtD
/// where k = |(Z^T P_perp Z / s2 + G^{-1})^{-1} Z^T d_hat| is the exact
/// operator norm of the rank-one error-propagation map. The sum is a strict
/// bound on |beta_hat - beta| by Cauchy-Schwarz. Estimating k by the
/// eigenvalue ratio c/(1-c) times |gamma_hat| undershoots it on
/// ill-conditioned mixture penalties and can void the bound, so the exact
/// form is used.
inline DiagnosticsReport diagnostics(const IndividualDataset& data, const FirstStageFit& fit,
                                     double tau2, double sigma2_eta, PriorKind mode,
                                     const IntVector* xi = nullptr, double nu0 = 0.0,
                                     double mu_alpha = 0.0, const Vector* alpha_true = nullptr,
                                     const Vector* eta_hat = nullptr) {
  if (mode == PriorKind::mixture && xi == nullptr) {
    throw NumericalError("diagnostics: mixture mode requires xi");
  }
  const CrossMoments m = cross_moments(data, fit);
  DiagnosticsReport report =
      constants_report(m, tau2, sigma2_eta, mode == PriorKind::mixture ? xi : nullptr, nu0);

  if (alpha_true == nullptr || eta_hat == nullptr || !report.assumption_ok) return report;

  const Vector prior_mean = mode == PriorKind::mixture ? mixture_prior_mean(*xi, mu_alpha)
                                                       : Vector::Constant(m.J, mu_alpha);
  const Vector prior_var = mode == PriorKind::mixture ? mixture_prior_var(*xi, tau2, nu0)
                                                      : Vector::Constant(m.J, tau2);
  const Vector scaled_dev = (*alpha_true - prior_mean).cwiseQuotient(prior_var);

  const double d_eta = fit.d_hat.dot(*eta_hat);
  const Vector z_perp_eta = data.Z.transpose() * *eta_hat - m.ZtD * (d_eta / m.DtD);

  // Penalized Gram of the projected-out instrument block; always positive
  // definite for positive prior variances.
  const Matrix perp_gram =
      (m.ZtZ - m.ZtD * m.ZtD.transpose() / m.DtD) / sigma2_eta +
      Matrix(prior_var.cwiseInverse().asDiagonal());
  const Eigen::LLT<Matrix> llt(perp_gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("diagnostics: projected penalized Gram is not positive definite");
  }
  const double propagation = llt.solve(m.ZtD).norm();

  const double shrinkage = propagation * scaled_dev.norm() / m.DtD;
  const double projection = propagation * z_perp_eta.norm() / (sigma2_eta * m.DtD);
  const double endogeneity = std::abs(d_eta) / m.DtD;
  report.bound_terms = {shrinkage, projection, endogeneity};
  report.bound_total = shrinkage + projection + endogeneity;
  return report;
}

}  // namespace mreb
