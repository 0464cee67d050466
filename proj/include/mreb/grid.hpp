#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mreb/errors.hpp"
#include "mreb/mcem.hpp"
#include "mreb/simulate.hpp"
#include "mreb/types.hpp"

namespace mreb {

enum class EstimatorKind { tsls, eb_single, mr_eb };

inline const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::tsls: return "tsls";
    case EstimatorKind::eb_single: return "eb-single";
    case EstimatorKind::mr_eb: return "mr-eb";
  }
  return "?";
}

inline EstimatorKind parse_estimator(const std::string& name) {
  if (name == "tsls") return EstimatorKind::tsls;
  if (name == "eb-single") return EstimatorKind::eb_single;
  if (name == "mr-eb") return EstimatorKind::mr_eb;
  throw ConfigError("unknown estimator '" + name + "' (expected tsls, eb-single, or mr-eb)");
}

/// Aggregated outcome of one scenario x estimator cell.
struct GridCellResult {
  SimulationScenario scenario;
  EstimatorKind estimator = EstimatorKind::tsls;
  int replicates = 0;
  int failed_replicates = 0;
  double mse = std::numeric_limits<double>::quiet_NaN();
  // Mean realized regularity constant across successful replicates; NaN for
  // estimators that carry no diagnostics (TSLS).
  double mean_c_double_star = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct ReplicateOutcome {
  std::optional<double> squared_error;
  double c_double_star = std::numeric_limits<double>::quiet_NaN();
};

// Seed scheme: the dataset of replicate r uses derive_seed(scenario.seed, 2r)
// and estimator k chains use derive_seed(derive_seed(scenario.seed, 2r+1), k),
// so replicates and estimators are mutually independent yet reproducible.
inline void run_replicate(const SimulationScenario& sc, int rep,
                          std::span<const EstimatorKind> estimators, const PriorConfig& prior,
                          const McemSettings& settings_template,
                          std::span<ReplicateOutcome> out) {
  SimulationScenario local = sc;
  local.seed = SeededGenerator::derive_seed(sc.seed, 2 * static_cast<std::uint64_t>(rep));
  const std::uint64_t fit_base =
      SeededGenerator::derive_seed(sc.seed, 2 * static_cast<std::uint64_t>(rep) + 1);

  std::optional<IndividualDataset> data;
  std::optional<FirstStageFit> fit;

  for (std::size_t k = 0; k < estimators.size(); ++k) {
    try {
      if (!data) {
        data = simulate(local).first;
        fit = first_stage(*data);
      }
      double beta_hat = 0.0;
      if (estimators[k] == EstimatorKind::tsls) {
        beta_hat = tsls(*data, *fit);
      } else {
        McemSettings settings = settings_template;
        settings.seed = SeededGenerator::derive_seed(fit_base, k);
        const CrossMoments m = cross_moments(*data, *fit);
        const EstimateResult result =
            run_mcem(m, prior, settings,
                     estimators[k] == EstimatorKind::mr_eb ? PriorKind::mixture
                                                           : PriorKind::single_gaussian);
        beta_hat = result.beta_hat;
        out[k].c_double_star = result.diagnostics.c_double_star;
      }
      if (!std::isfinite(beta_hat)) throw NumericalError("non-finite estimate");
      const double err = beta_hat - sc.beta;
      out[k].squared_error = err * err;
    } catch (const std::exception&) {
      out[k].squared_error.reset();
      out[k].c_double_star = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

}  // namespace detail

/// Runs every scenario for the requested replicate count and estimators,
/// farming (scenario, replicate) tasks over a small worker pool. Estimators
/// within a replicate share the simulated dataset so they are compared on
/// common data. Replicate failures are excluded from the cell mean and
/// counted, never fatal. Output ordering and values are independent of the
/// thread count.
inline std::vector<GridCellResult> run_grid(std::span<const SimulationScenario> scenarios,
                                            int replicates,
                                            std::span<const EstimatorKind> estimators,
                                            const PriorConfig& prior,
                                            const McemSettings& settings_template,
                                            int threads = 0) {
  if (scenarios.empty()) throw ConfigError("grid: no scenarios");
  if (replicates < 1) throw ConfigError("grid: replicates must be >= 1");
  if (estimators.empty()) throw ConfigError("grid: no estimators selected");
  validate(prior);
  validate(settings_template);
  for (const auto& sc : scenarios) validate(sc);

  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  const std::size_t n_sc = scenarios.size();
  const std::size_t n_est = estimators.size();
  const std::size_t n_rep = static_cast<std::size_t>(replicates);
  std::vector<detail::ReplicateOutcome> outcomes(n_sc * n_rep * n_est);

  std::atomic<std::size_t> next_task{0};
  const std::size_t total_tasks = n_sc * n_rep;
  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= total_tasks) return;
      const std::size_t sc_idx = task / n_rep;
      const int rep = static_cast<int>(task % n_rep);
      detail::run_replicate(scenarios[sc_idx], rep, estimators, prior, settings_template,
                            std::span(outcomes).subspan(task * n_est, n_est));
    }
  };
  {
    std::vector<std::jthread> pool;
    const int spawn = std::min<int>(threads, static_cast<int>(total_tasks));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
  }

  std::vector<GridCellResult> table;
  table.reserve(n_sc * n_est);
  for (std::size_t s = 0; s < n_sc; ++s) {
    for (std::size_t k = 0; k < n_est; ++k) {
      GridCellResult cell;
      cell.scenario = scenarios[s];
      cell.estimator = estimators[k];
      cell.replicates = replicates;
      double err_sum = 0.0;
      int err_count = 0;
      double c_sum = 0.0;
      int c_count = 0;
      for (std::size_t r = 0; r < n_rep; ++r) {
        const auto& o = outcomes[(s * n_rep + r) * n_est + k];
        if (o.squared_error) {
          err_sum += *o.squared_error;
          ++err_count;
          if (std::isfinite(o.c_double_star)) {
            c_sum += o.c_double_star;
            ++c_count;
          }
        } else {
          ++cell.failed_replicates;
        }
      }
      if (err_count > 0) cell.mse = err_sum / static_cast<double>(err_count);
      if (c_count > 0) cell.mean_c_double_star = c_sum / static_cast<double>(c_count);
      table.push_back(cell);
    }
  }
  return table;
}

}  // namespace mreb
