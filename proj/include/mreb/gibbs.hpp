#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "mreb/errors.hpp"
#include "mreb/moments.hpp"
#include "mreb/ridge.hpp"
#include "mreb/rng.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// One Gibbs draw of the middle-layer parameters. In single-Gaussian mode xi
/// is the all-ones sentinel.
struct PosteriorSample {
  Vector alpha;
  IntVector xi;
  double tau2 = 0.0;
  double sigma2_eta = 0.0;
};

/// A sequentially advanced chain; single-owner, deterministic given its seed.
struct ChainState {
  PosteriorSample current;
  SeededGenerator rng;
  std::int64_t step_count = 0;
};

/// Mean and covariance of the Gaussian full conditional of alpha given
/// (beta, sigma2_eta) and per-coordinate prior (mean_j, var_j):
///   cov  = (Z^T Z / sigma2_eta + diag(1/var))^{-1}
///   mean = cov (Z^T (Y - d_hat beta) / sigma2_eta + mean ./ var)
struct AlphaConditional {
  Vector mean;
  Matrix cov;
};

inline AlphaConditional alpha_conditional(const CrossMoments& m, double beta, double sigma2_eta,
                                          const Vector& prior_mean, const Vector& prior_var) {
  const Matrix precision =
      m.ZtZ / sigma2_eta + Matrix(prior_var.cwiseInverse().asDiagonal());
  const Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("gibbs: alpha conditional precision is not positive definite");
  }
  AlphaConditional cond;
  cond.cov = llt.solve(Matrix::Identity(m.J, m.J));
  cond.mean = cond.cov * ((m.ZtY - m.ZtD * beta) / sigma2_eta +
                          prior_mean.cwiseQuotient(prior_var));
  return cond;
}

/// Samples from an AlphaConditional through a Cholesky factor of the
/// covariance. On factorization failure a jitter of 1e-12 * trace/J is added
/// to the diagonal and the factorization retried once.
inline Vector draw_alpha(SeededGenerator& gen, const AlphaConditional& cond) {
  Eigen::LLT<Matrix> llt(cond.cov);
  if (llt.info() != Eigen::Success) {
    const Index J = cond.cov.rows();
    const double jitter = 1e-12 * cond.cov.trace() / static_cast<double>(J);
    llt.compute(cond.cov + jitter * Matrix::Identity(J, J));
    if (llt.info() != Eigen::Success) {
      throw NumericalError("gibbs: covariance Cholesky failed after jitter");
    }
  }
  return draw_mvn_chol(gen, cond.mean, llt.matrixL());
}

/// tau^{-2} | rest ~ Gamma(nu1 + J/2, nu2 + sum_j (alpha_j - mu_alpha)^2 / 2).
inline double draw_tau2_single(SeededGenerator& gen, const PriorConfig& prior,
                               const Vector& alpha, double mu_alpha) {
  const double shape = prior.nu1 + 0.5 * static_cast<double>(alpha.size());
  const double rate = prior.nu2 + 0.5 * (alpha.array() - mu_alpha).square().sum();
  return 1.0 / draw_gamma(gen, shape, rate);
}

/// Mixture variant: the spike coordinates contribute alpha_j^2 / nu0 and the
/// slab coordinates (alpha_j - mu_alpha)^2.
inline double draw_tau2_mixture(SeededGenerator& gen, const PriorConfig& prior,
                                const Vector& alpha, const IntVector& xi, double mu_alpha) {
  double quad = 0.0;
  for (Index j = 0; j < alpha.size(); ++j) {
    if (xi[j] != 0) {
      const double dev = alpha[j] - mu_alpha;
      quad += dev * dev;
    } else {
      quad += alpha[j] * alpha[j] / prior.nu0;
    }
  }
  const double shape = prior.nu1 + 0.5 * static_cast<double>(alpha.size());
  return 1.0 / draw_gamma(gen, shape, prior.nu2 + 0.5 * quad);
}

/// sigma_eta^{-2} | rest ~ Gamma(nu3 + n/2, nu4 + rss/2) with the residual
/// sum of squares at the current (beta, alpha).
inline double draw_sigma2_eta(SeededGenerator& gen, const PriorConfig& prior,
                              const CrossMoments& m, double beta, const Vector& alpha) {
  const double shape = prior.nu3 + 0.5 * static_cast<double>(m.n);
  const double rate = prior.nu4 + 0.5 * residual_norm2(m, beta, alpha);
  return 1.0 / draw_gamma(gen, shape, rate);
}

/// Posterior slab probability of coordinate j given its alpha value,
/// evaluated with log-density differences so a tiny spike variance cannot
/// underflow:
///   p_j = p0 N(alpha | mu, tau2) / [p0 N(alpha | mu, tau2)
///                                   + (1-p0) N(alpha | 0, nu0 tau2)]
inline double slab_probability(double alpha_j, double mu_alpha, double tau2, double nu0,
                               double p0) {
  if (p0 <= 0.0) return 0.0;
  if (p0 >= 1.0) return 1.0;
  const double dev = alpha_j - mu_alpha;
  const double log_slab = std::log(p0) - 0.5 * std::log(tau2) - 0.5 * dev * dev / tau2;
  const double log_spike =
      std::log1p(-p0) - 0.5 * std::log(nu0 * tau2) - 0.5 * alpha_j * alpha_j / (nu0 * tau2);
  return 1.0 / (1.0 + std::exp(log_spike - log_slab));
}

inline IntVector draw_xi(SeededGenerator& gen, const Vector& alpha, double mu_alpha, double tau2,
                         double nu0, double p0) {
  IntVector xi(alpha.size());
  for (Index j = 0; j < alpha.size(); ++j) {
    xi[j] = draw_bernoulli(gen, slab_probability(alpha[j], mu_alpha, tau2, nu0, p0)) ? 1 : 0;
  }
  return xi;
}

/// Chain start: alpha at zero, xi drawn from its prior (all ones in single
/// mode), tau2 at its prior mean scale, sigma2_eta at the sample variance of
/// Y (fixed at 1 when the residual scale is absorbed).
inline ChainState init_chain(const CrossMoments& m, const PriorConfig& prior, std::uint64_t seed,
                             PriorKind kind) {
  ChainState state{PosteriorSample{}, SeededGenerator(seed), 0};
  state.current.alpha = Vector::Zero(m.J);
  if (kind == PriorKind::mixture) {
    IntVector xi(m.J);
    for (Index j = 0; j < m.J; ++j) xi[j] = draw_bernoulli(state.rng, prior.p0_init) ? 1 : 0;
    state.current.xi = xi;
  } else {
    state.current.xi = IntVector::Ones(m.J);
  }
  state.current.tau2 = prior.nu2 / prior.nu1;
  state.current.sigma2_eta =
      m.sigma_eta_absorbed ? 1.0 : m.YtY / static_cast<double>(m.n > 1 ? m.n - 1 : 1);
  if (!(state.current.sigma2_eta > 0.0)) state.current.sigma2_eta = 1.0;
  return state;
}

/// One systematic sweep of the single-Gaussian chain: alpha, then tau2, then
/// sigma2_eta, each conditional using the latest values of the others.
inline void gibbs_step_single(ChainState& state, const CrossMoments& m, double beta,
                              double mu_alpha, const PriorConfig& prior) {
  PosteriorSample& cur = state.current;
  const AlphaConditional cond =
      alpha_conditional(m, beta, cur.sigma2_eta, Vector::Constant(m.J, mu_alpha),
                        Vector::Constant(m.J, cur.tau2));
  cur.alpha = draw_alpha(state.rng, cond);
  cur.tau2 = draw_tau2_single(state.rng, prior, cur.alpha, mu_alpha);
  if (!m.sigma_eta_absorbed) {
    cur.sigma2_eta = draw_sigma2_eta(state.rng, prior, m, beta, cur.alpha);
  }
  ++state.step_count;
}

/// One systematic sweep of the mixture chain: alpha, xi, tau2, sigma2_eta.
inline void gibbs_step_mixture(ChainState& state, const CrossMoments& m, double beta,
                               double mu_alpha, double p0, const PriorConfig& prior) {
  PosteriorSample& cur = state.current;
  const AlphaConditional cond =
      alpha_conditional(m, beta, cur.sigma2_eta, mixture_prior_mean(cur.xi, mu_alpha),
                        mixture_prior_var(cur.xi, cur.tau2, prior.nu0));
  cur.alpha = draw_alpha(state.rng, cond);
  cur.xi = draw_xi(state.rng, cur.alpha, mu_alpha, cur.tau2, prior.nu0, p0);
  cur.tau2 = draw_tau2_mixture(state.rng, prior, cur.alpha, cur.xi, mu_alpha);
  if (!m.sigma_eta_absorbed) {
    cur.sigma2_eta = draw_sigma2_eta(state.rng, prior, m, beta, cur.alpha);
  }
  ++state.step_count;
}

}  // namespace mreb
