#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "mreb/errors.hpp"
#include "mreb/rng.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// One synthetic-experiment configuration. Defaults follow the standard
/// benchmark: 1000 observations, 30 candidate instruments, unit-variance
/// confounded noise with correlation 0.2, instrument strengths uniform on
/// [0.1, 0.3].
struct SimulationScenario {
  Index n = 1000;
  Index J = 30;
  double beta = 0.2;        // true causal effect
  double mu_alpha = 0.0;    // mean pleiotropic effect of invalid instruments
  double p0 = 0.0;          // proportion of invalid instruments
  bool inside_ok = true;    // instrument strength independent of direct effects
  double cov_v = 1.0;       // Var(v)
  double cov_eps = 1.0;     // Var(eps)
  double cov_v_eps = 0.2;   // Cov(v, eps); nonzero means confounding
  double gamma_min = 0.1;
  double gamma_max = 0.3;
  std::uint64_t seed = 0;
};

/// Ground truth behind a simulated dataset, including the raw (uncentered)
/// observations and noise realizations so model-identity checks can be run.
struct SimulationTruth {
  double beta = 0.0;
  Vector gamma;
  Vector alpha;
  IntVector xi;
  Vector v;
  Vector eps;
  IndividualDataset raw;
};

inline void validate(const SimulationScenario& sc) {
  if (sc.J < 1) throw ConfigError("scenario: J must be >= 1");
  if (sc.n < sc.J + 1) throw ConfigError("scenario: requires n >= J + 1");
  if (!(sc.p0 >= 0.0 && sc.p0 <= 1.0)) throw ConfigError("scenario: p0 must lie in [0, 1]");
  if (!(sc.gamma_min < sc.gamma_max)) throw ConfigError("scenario: requires gamma_min < gamma_max");
  const double det = sc.cov_v * sc.cov_eps - sc.cov_v_eps * sc.cov_v_eps;
  if (!(sc.cov_v > 0.0) || !(det > 0.0)) {
    throw ConfigError("scenario: (v, eps) covariance must be positive definite");
  }
  if (!std::isfinite(sc.beta) || !std::isfinite(sc.mu_alpha)) {
    throw ConfigError("scenario: beta and mu_alpha must be finite");
  }
}

/// Draws one dataset from the structural model
///   D = Z gamma + v,  Y = beta D + Z alpha + eps,
/// with Z iid standard normal, gamma_j uniform, xi_j Bernoulli(p0), and
/// alpha_j = xi_j u_j (u_j uniform around mu_alpha); when the
/// strength-independence flag is off, alpha_j = (0.2 gamma_j + u_j) xi_j
/// couples the direct effects to the instrument strengths. The returned
/// dataset is centered; the truth bundle keeps the raw draws.
inline std::pair<IndividualDataset, SimulationTruth> simulate(const SimulationScenario& sc) {
  validate(sc);
  SeededGenerator gen(sc.seed);

  SimulationTruth truth;
  truth.beta = sc.beta;
  truth.gamma.resize(sc.J);
  for (Index j = 0; j < sc.J; ++j) truth.gamma[j] = draw_uniform(gen, sc.gamma_min, sc.gamma_max);
  truth.xi.resize(sc.J);
  for (Index j = 0; j < sc.J; ++j) truth.xi[j] = draw_bernoulli(gen, sc.p0) ? 1 : 0;
  Vector u(sc.J);
  for (Index j = 0; j < sc.J; ++j) u[j] = draw_uniform(gen, sc.mu_alpha - 0.2, sc.mu_alpha + 0.2);
  truth.alpha.resize(sc.J);
  for (Index j = 0; j < sc.J; ++j) {
    const double direct = sc.inside_ok ? u[j] : 0.2 * truth.gamma[j] + u[j];
    truth.alpha[j] = truth.xi[j] != 0 ? direct : 0.0;
  }

  IndividualDataset raw;
  raw.n = sc.n;
  raw.J = sc.J;
  raw.Z.resize(sc.n, sc.J);
  for (Index i = 0; i < sc.n; ++i) {
    for (Index j = 0; j < sc.J; ++j) raw.Z(i, j) = draw_standard_normal(gen);
  }

  // Bivariate normal noise via the 2x2 Cholesky factor.
  const double l11 = std::sqrt(sc.cov_v);
  const double l21 = sc.cov_v_eps / l11;
  const double l22 = std::sqrt(sc.cov_eps - l21 * l21);
  truth.v.resize(sc.n);
  truth.eps.resize(sc.n);
  for (Index i = 0; i < sc.n; ++i) {
    const double z1 = draw_standard_normal(gen);
    const double z2 = draw_standard_normal(gen);
    truth.v[i] = l11 * z1;
    truth.eps[i] = l21 * z1 + l22 * z2;
  }

  raw.D = raw.Z * truth.gamma + truth.v;
  raw.Y = sc.beta * raw.D + raw.Z * truth.alpha + truth.eps;
  truth.raw = raw;

  return {center_columns(raw), std::move(truth)};
}

/// Independent draws from the spike-and-slab prior itself: with probability
/// p0 a slab draw N(mu_alpha, tau2), otherwise a spike draw N(0, nu0 tau2).
inline Vector sample_mixture_prior(double mu_alpha, double tau2, double nu0, double p0,
                                   Index count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("prior sample: count must be >= 1");
  if (!(tau2 > 0.0)) throw ConfigError("prior sample: tau2 must be > 0");
  if (!(nu0 > 0.0 && nu0 < 1.0)) throw ConfigError("prior sample: nu0 must lie in (0, 1)");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ConfigError("prior sample: p0 must lie in [0, 1]");
  SeededGenerator gen(seed);
  Vector draws(count);
  for (Index i = 0; i < count; ++i) {
    draws[i] = draw_bernoulli(gen, p0) ? draw_normal(gen, mu_alpha, tau2)
                                       : draw_normal(gen, 0.0, nu0 * tau2);
  }
  return draws;
}

}  // namespace mreb
