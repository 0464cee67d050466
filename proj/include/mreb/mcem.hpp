#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mreb/diagnostics.hpp"
#include "mreb/errors.hpp"
#include "mreb/first_stage.hpp"
#include "mreb/gibbs.hpp"
#include "mreb/moments.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Marginal estimates at one EM iteration. p0 is NaN under the
/// single-Gaussian prior.
struct TracePoint {
  double beta = 0.0;
  double mu_alpha = 0.0;
  double p0 = std::numeric_limits<double>::quiet_NaN();
};

/// Converged (or final) marginal estimates with the per-iteration trace and
/// the regularity constants evaluated at the posterior-mean variance
/// components of the last E-step.
struct EstimateResult {
  double beta_hat = 0.0;
  double mu_alpha_hat = 0.0;
  std::optional<double> p0_hat;
  int iters = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
  DiagnosticsReport diagnostics;
};

/// Optional per-sweep observer, used for chain-trace dumps.
using ChainSink = std::function<void(std::int64_t step, const PosteriorSample&)>;

/// The causal-effect estimate implied by a single posterior draw of alpha.
inline double beta_given_alpha(const CrossMoments& m, const Vector& alpha) {
  return (m.DtY - m.ZtD.dot(alpha)) / m.DtD;
}

/// Closed-form M-step under the single-Gaussian prior:
///   beta     = mean_i of d_hat^T (Y - Z alpha_i) / d_hat^T d_hat
///   mu_alpha = (sum_ij alpha_ij / tau2_i) / (sum_i J / tau2_i)
struct MstepEstimates {
  double beta = 0.0;
  double mu_alpha = 0.0;
  double p0 = std::numeric_limits<double>::quiet_NaN();
};

inline MstepEstimates mstep_single(const CrossMoments& m, std::span<const PosteriorSample> draws) {
  double beta_sum = 0.0;
  double weighted_alpha = 0.0;
  double weight = 0.0;
  for (const PosteriorSample& s : draws) {
    beta_sum += beta_given_alpha(m, s.alpha);
    weighted_alpha += s.alpha.sum() / s.tau2;
    weight += static_cast<double>(m.J) / s.tau2;
  }
  MstepEstimates est;
  est.beta = beta_sum / static_cast<double>(draws.size());
  est.mu_alpha = weighted_alpha / weight;
  return est;
}

/// Closed-form M-step under the mixture prior:
///   beta     as above
///   mu_alpha = (sum_ij alpha_ij xi_ij / tau2_i) / (sum_ij xi_ij / tau2_i)
///   p0       = mean of all xi_ij
/// When no draw selects any coordinate the mu_alpha average is empty, so the
/// previous value is kept.
inline MstepEstimates mstep_mixture(const CrossMoments& m, std::span<const PosteriorSample> draws,
                                    double fallback_mu_alpha) {
  double beta_sum = 0.0;
  double weighted_alpha = 0.0;
  double weight = 0.0;
  double xi_total = 0.0;
  for (const PosteriorSample& s : draws) {
    beta_sum += beta_given_alpha(m, s.alpha);
    for (Index j = 0; j < m.J; ++j) {
      if (s.xi[j] != 0) {
        weighted_alpha += s.alpha[j] / s.tau2;
        weight += 1.0 / s.tau2;
        xi_total += 1.0;
      }
    }
  }
  MstepEstimates est;
  est.beta = beta_sum / static_cast<double>(draws.size());
  est.mu_alpha = weight > 0.0 ? weighted_alpha / weight : fallback_mu_alpha;
  est.p0 = xi_total / (static_cast<double>(draws.size()) * static_cast<double>(m.J));
  return est;
}

/// Sample average of the complete-data log posterior of (beta, mu_alpha) over
/// an E-step draw set, up to additive terms free of the arguments. The
/// closed-form M-step is its exact maximizer.
inline double sampled_q_single(const CrossMoments& m, std::span<const PosteriorSample> draws,
                               double beta, double mu_alpha) {
  double total = 0.0;
  for (const PosteriorSample& s : draws) {
    total += -0.5 * residual_norm2(m, beta, s.alpha);
    total += -0.5 * (s.alpha.array() - mu_alpha).square().sum() / s.tau2;
  }
  return total / static_cast<double>(draws.size());
}

/// Mixture counterpart over (beta, mu_alpha, p0); only slab coordinates see
/// mu_alpha, and the selection indicators contribute the Bernoulli
/// log-likelihood of p0.
inline double sampled_q_mixture(const CrossMoments& m, std::span<const PosteriorSample> draws,
                                double nu0, double beta, double mu_alpha, double p0) {
  double total = 0.0;
  for (const PosteriorSample& s : draws) {
    total += -0.5 * residual_norm2(m, beta, s.alpha);
    for (Index j = 0; j < m.J; ++j) {
      const double dev = s.alpha[j] - (s.xi[j] != 0 ? mu_alpha : 0.0);
      const double var_scale = s.xi[j] != 0 ? 1.0 : nu0;
      total += -0.5 * dev * dev / (var_scale * s.tau2);
      total += s.xi[j] != 0 ? std::log(p0) : std::log1p(-p0);
    }
  }
  return total / static_cast<double>(draws.size());
}

namespace detail {

inline double relative_change(double current, double previous) {
  return std::abs(current - previous) / (std::abs(previous) + 0.01);
}

}  // namespace detail

/// Monte Carlo EM driver shared by all three estimators. Each iteration runs
/// the Gibbs chain for burn_in discarded sweeps plus mc_samples recorded
/// sweeps at the current marginal estimates (the chain warm-starts from the
/// previous E-step), then applies the closed-form M-step. Convergence is
/// declared when every monitored estimate moves by less than tol in relative
/// terms; the reported estimates average the last (up to) 10 trace points to
/// damp residual Monte Carlo jitter.
inline EstimateResult run_mcem(const CrossMoments& m, const PriorConfig& prior,
                               const McemSettings& settings, PriorKind kind,
                               const ChainSink& sink = {}) {
  validate(prior);
  validate(settings);

  const bool mixture = kind == PriorKind::mixture;
  const double p0_floor = 1.0 / (static_cast<double>(settings.mc_samples) * static_cast<double>(m.J) + 1.0);

  double beta = prior.beta_init;
  double mu_alpha = prior.mu_alpha_init;
  double p0 = prior.p0_init;

  ChainState chain = init_chain(m, prior, settings.seed, kind);
  std::vector<PosteriorSample> draws;
  draws.reserve(static_cast<std::size_t>(settings.mc_samples));

  EstimateResult result;
  double tau2_mean = 0.0;
  double sigma2_mean = 0.0;
  Vector xi_mean = Vector::Zero(m.J);

  for (int t = 0; t < settings.max_iters; ++t) {
    draws.clear();
    tau2_mean = sigma2_mean = 0.0;
    xi_mean.setZero();
    for (int i = 0; i < settings.burn_in + settings.mc_samples; ++i) {
      if (mixture) {
        gibbs_step_mixture(chain, m, beta, mu_alpha, p0, prior);
      } else {
        gibbs_step_single(chain, m, beta, mu_alpha, prior);
      }
      if (sink) sink(chain.step_count, chain.current);
      if (i >= settings.burn_in) {
        draws.push_back(chain.current);
        tau2_mean += chain.current.tau2;
        sigma2_mean += chain.current.sigma2_eta;
        xi_mean += chain.current.xi.cast<double>();
      }
    }
    tau2_mean /= static_cast<double>(settings.mc_samples);
    sigma2_mean /= static_cast<double>(settings.mc_samples);
    xi_mean /= static_cast<double>(settings.mc_samples);

    const MstepEstimates est =
        mixture ? mstep_mixture(m, draws, mu_alpha) : mstep_single(m, draws);
    const double prev_beta = beta;
    const double prev_mu = mu_alpha;
    const double prev_p0 = p0;
    beta = est.beta;
    mu_alpha = est.mu_alpha;
    if (mixture) p0 = std::clamp(est.p0, p0_floor, 1.0 - p0_floor);

    if (!std::isfinite(beta) || !std::isfinite(mu_alpha) || (mixture && !std::isfinite(p0))) {
      throw NumericalError("mcem: non-finite marginal estimate at iteration " + std::to_string(t + 1));
    }

    result.trace.push_back({beta, mu_alpha,
                            mixture ? p0 : std::numeric_limits<double>::quiet_NaN()});

    double change = std::max(detail::relative_change(beta, prev_beta),
                             detail::relative_change(mu_alpha, prev_mu));
    if (mixture) change = std::max(change, detail::relative_change(p0, prev_p0));
    if (change < settings.tol) {
      result.converged = true;
      break;
    }
  }

  result.iters = static_cast<int>(result.trace.size());
  const std::size_t tail = std::min<std::size_t>(10, result.trace.size());
  double beta_acc = 0.0;
  double mu_acc = 0.0;
  double p0_acc = 0.0;
  for (std::size_t k = result.trace.size() - tail; k < result.trace.size(); ++k) {
    beta_acc += result.trace[k].beta;
    mu_acc += result.trace[k].mu_alpha;
    if (mixture) p0_acc += result.trace[k].p0;
  }
  result.beta_hat = beta_acc / static_cast<double>(tail);
  result.mu_alpha_hat = mu_acc / static_cast<double>(tail);
  if (mixture) result.p0_hat = p0_acc / static_cast<double>(tail);

  if (mixture) {
    IntVector xi_vote(m.J);
    for (Index j = 0; j < m.J; ++j) xi_vote[j] = xi_mean[j] > 0.5 ? 1 : 0;
    result.diagnostics = constants_report(m, tau2_mean, sigma2_mean, &xi_vote, prior.nu0);
  } else {
    result.diagnostics = constants_report(m, tau2_mean, sigma2_mean);
  }
  return result;
}

/// Empirical Bayes estimator under the common-location Gaussian prior.
inline EstimateResult fit_single_gaussian(const IndividualDataset& data, const PriorConfig& prior,
                                          const McemSettings& settings, const ChainSink& sink = {}) {
  validate(data);
  const FirstStageFit fit = first_stage(data);
  return run_mcem(cross_moments(data, fit), prior, settings, PriorKind::single_gaussian, sink);
}

/// Empirical Bayes estimator under the spike-and-slab prior; robust to
/// sparse, unbalanced pleiotropy.
inline EstimateResult fit_mr_eb(const IndividualDataset& data, const PriorConfig& prior,
                                const McemSettings& settings, const ChainSink& sink = {}) {
  validate(data);
  const FirstStageFit fit = first_stage(data);
  return run_mcem(cross_moments(data, fit), prior, settings, PriorKind::mixture, sink);
}

/// Mixture-prior estimator on per-variant summary statistics. The residual
/// scale is absorbed into the rebuilt cross-products, so its Gibbs update is
/// skipped and sigma2_eta stays at 1.
inline EstimateResult fit_summary(const SummaryDataset& summary, const PriorConfig& prior,
                                  const McemSettings& settings, const ChainSink& sink = {}) {
  validate(summary);
  return run_mcem(cross_moments(summary), prior, settings, PriorKind::mixture, sink);
}

}  // namespace mreb
