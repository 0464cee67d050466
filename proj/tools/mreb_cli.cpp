// Command-line front end: estimation on individual or summary data, synthetic
// data generation, experiment grids, prior sampling, and regularity
// diagnostics. Every run writes a manifest of its resolved configuration next
// to its outputs so results can be reproduced byte for byte.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mreb/mreb.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputDirEnv = "MREB_OUTPUT_DIR";

// Relative outputs land in the directory named by MREB_OUTPUT_DIR when set.
fs::path resolve_output(const std::string& given) {
  fs::path path(given);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      path = fs::path(dir) / path;
    }
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return path;
}

class Manifest {
 public:
  explicit Manifest(std::string command) { set("command", std::move(command)); }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  void set(const std::string& key, double value) { values_[key] = mreb::format_double(value); }
  void set(const std::string& key, std::uint64_t value) { values_[key] = std::to_string(value); }
  void set(const std::string& key, int value) { values_[key] = std::to_string(value); }
  void set(const std::string& key, bool value) { values_[key] = value ? "true" : "false"; }

  void set_estimation(const mreb::EstimationOptions& opts) {
    set("nu0", opts.prior.nu0);
    set("nu1", opts.prior.nu1);
    set("nu2", opts.prior.nu2);
    set("nu3", opts.prior.nu3);
    set("nu4", opts.prior.nu4);
    set("beta_init", opts.prior.beta_init);
    set("mu_alpha_init", opts.prior.mu_alpha_init);
    set("p0_init", opts.prior.p0_init);
    set("mc_samples", opts.settings.mc_samples);
    set("burn_in", opts.settings.burn_in);
    set("max_iters", opts.settings.max_iters);
    set("tol", opts.settings.tol);
    set("seed", opts.settings.seed);
  }

  void write(const fs::path& output) const {
    const fs::path path = output.string() + ".manifest";
    std::ofstream out(path);
    if (!out) throw mreb::DataError("cannot write manifest: " + path.string());
    for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
  }

 private:
  std::map<std::string, std::string> values_;
};

std::string csv_value(double x) {
  return std::isfinite(x) ? mreb::format_double(x) : std::string{};
}

void write_estimate_csv(const fs::path& path, const std::string& estimator,
                        const mreb::EstimateResult& result) {
  std::ofstream out(path);
  if (!out) throw mreb::DataError("cannot write results: " + path.string());
  out << "estimator,beta_hat,mu_alpha_hat,p0_hat,iters,converged,c_star,c_double_star,"
         "assumption_ok\n";
  out << estimator << "," << mreb::format_double(result.beta_hat) << ","
      << csv_value(result.mu_alpha_hat) << ","
      << (result.p0_hat ? mreb::format_double(*result.p0_hat) : std::string{}) << ","
      << result.iters << "," << (result.converged ? 1 : 0) << ","
      << csv_value(result.diagnostics.c_star) << ","
      << csv_value(result.diagnostics.c_double_star) << ","
      << (result.diagnostics.assumption_ok ? 1 : 0) << "\n";
}

void write_trace_csv(const fs::path& path, const mreb::EstimateResult& result) {
  std::ofstream out(path);
  if (!out) throw mreb::DataError("cannot write trace: " + path.string());
  out << "iter,beta,mu_alpha,p0\n";
  for (std::size_t t = 0; t < result.trace.size(); ++t) {
    const auto& point = result.trace[t];
    out << (t + 1) << "," << mreb::format_double(point.beta) << ","
        << mreb::format_double(point.mu_alpha) << "," << csv_value(point.p0) << "\n";
  }
}

// Streams Gibbs sweeps to CSV when --dump-chain is given.
class ChainDump {
 public:
  explicit ChainDump(const fs::path& path) : out_(path) {
    if (!out_) throw mreb::DataError("cannot write chain trace: " + path.string());
  }

  mreb::ChainSink sink() {
    return [this](std::int64_t step, const mreb::PosteriorSample& sample) {
      if (!header_written_) {
        out_ << "step";
        for (mreb::Index j = 0; j < sample.alpha.size(); ++j) out_ << ",alpha" << (j + 1);
        for (mreb::Index j = 0; j < sample.xi.size(); ++j) out_ << ",xi" << (j + 1);
        out_ << ",tau2,sigma2_eta\n";
        header_written_ = true;
      }
      out_ << step;
      for (mreb::Index j = 0; j < sample.alpha.size(); ++j) {
        out_ << "," << mreb::format_double(sample.alpha[j]);
      }
      for (mreb::Index j = 0; j < sample.xi.size(); ++j) out_ << "," << sample.xi[j];
      out_ << "," << mreb::format_double(sample.tau2) << ","
           << mreb::format_double(sample.sigma2_eta) << "\n";
    };
  }

 private:
  std::ofstream out_;
  bool header_written_ = false;
};

struct EstimationFlags {
  std::string config_path;
  mreb::PriorConfig prior;
  mreb::McemSettings settings;
};

// Precedence: built-in defaults < config file < explicit flags.
void add_estimation_options(CLI::App* cmd, EstimationFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Estimation config file (flat key = value; flags override)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--nu0", flags.prior.nu0, "Spike-to-slab variance ratio");
  cmd->add_option("--nu1", flags.prior.nu1, "Shape of the Gamma prior on 1/tau2");
  cmd->add_option("--nu2", flags.prior.nu2, "Rate of the Gamma prior on 1/tau2");
  cmd->add_option("--nu3", flags.prior.nu3, "Shape of the Gamma prior on 1/sigma2_eta");
  cmd->add_option("--nu4", flags.prior.nu4, "Rate of the Gamma prior on 1/sigma2_eta");
  cmd->add_option("--beta-init", flags.prior.beta_init, "Starting causal-effect estimate");
  cmd->add_option("--mu-alpha-init", flags.prior.mu_alpha_init, "Starting location estimate");
  cmd->add_option("--p0-init", flags.prior.p0_init, "Starting invalid proportion");
  cmd->add_option("--mc-samples", flags.settings.mc_samples, "Gibbs draws kept per E-step");
  cmd->add_option("--burn-in", flags.settings.burn_in, "Discarded draws per E-step");
  cmd->add_option("--max-iters", flags.settings.max_iters, "EM iteration cap");
  cmd->add_option("--tol", flags.settings.tol, "Relative-change convergence threshold");
  cmd->add_option("--seed", flags.settings.seed, "RNG seed");
}

mreb::EstimationOptions resolve_estimation(const CLI::App* cmd, const EstimationFlags& flags) {
  mreb::EstimationOptions opts;
  if (!flags.config_path.empty()) {
    opts = mreb::apply_estimation_config(mreb::KeyValueFile::load(flags.config_path), opts);
  }
  if (cmd->count("--nu0") > 0) opts.prior.nu0 = flags.prior.nu0;
  if (cmd->count("--nu1") > 0) opts.prior.nu1 = flags.prior.nu1;
  if (cmd->count("--nu2") > 0) opts.prior.nu2 = flags.prior.nu2;
  if (cmd->count("--nu3") > 0) opts.prior.nu3 = flags.prior.nu3;
  if (cmd->count("--nu4") > 0) opts.prior.nu4 = flags.prior.nu4;
  if (cmd->count("--beta-init") > 0) opts.prior.beta_init = flags.prior.beta_init;
  if (cmd->count("--mu-alpha-init") > 0) opts.prior.mu_alpha_init = flags.prior.mu_alpha_init;
  if (cmd->count("--p0-init") > 0) opts.prior.p0_init = flags.prior.p0_init;
  if (cmd->count("--mc-samples") > 0) opts.settings.mc_samples = flags.settings.mc_samples;
  if (cmd->count("--burn-in") > 0) opts.settings.burn_in = flags.settings.burn_in;
  if (cmd->count("--max-iters") > 0) opts.settings.max_iters = flags.settings.max_iters;
  if (cmd->count("--tol") > 0) opts.settings.tol = flags.settings.tol;
  if (cmd->count("--seed") > 0) opts.settings.seed = flags.settings.seed;
  return opts;
}

int run_estimate(const std::string& input, const std::string& output,
                 const std::string& estimator, const CLI::App* cmd,
                 const EstimationFlags& flags, const std::string& dump_chain) {
  const mreb::EstimationOptions opts = resolve_estimation(cmd, flags);
  const mreb::EstimatorKind kind = mreb::parse_estimator(estimator);
  const fs::path out = resolve_output(output);

  const auto data = mreb::load_individual(input);

  std::optional<ChainDump> dump;
  mreb::ChainSink sink;
  if (!dump_chain.empty()) {
    dump.emplace(resolve_output(dump_chain));
    sink = dump->sink();
  }

  mreb::EstimateResult result;
  if (kind == mreb::EstimatorKind::tsls) {
    const auto fit = mreb::first_stage(data);
    result.beta_hat = mreb::tsls(data, fit);
    result.mu_alpha_hat = std::numeric_limits<double>::quiet_NaN();
    result.converged = true;
  } else if (kind == mreb::EstimatorKind::eb_single) {
    result = mreb::fit_single_gaussian(data, opts.prior, opts.settings, sink);
  } else {
    result = mreb::fit_mr_eb(data, opts.prior, opts.settings, sink);
  }

  write_estimate_csv(out, estimator, result);
  write_trace_csv(out.string() + ".trace.csv", result);

  Manifest manifest("estimate");
  manifest.set("input", input);
  manifest.set("output", output);
  manifest.set("estimator", estimator);
  manifest.set("n", static_cast<std::uint64_t>(data.n));
  manifest.set("J", static_cast<std::uint64_t>(data.J));
  manifest.set_estimation(opts);
  manifest.write(out);

  std::cout << "beta_hat = " << mreb::format_double(result.beta_hat) << "\n";
  return 0;
}

int run_estimate_summary(const std::string& input, const std::string& output,
                         const CLI::App* cmd, const EstimationFlags& flags,
                         const std::string& dump_chain) {
  const mreb::EstimationOptions opts = resolve_estimation(cmd, flags);
  const fs::path out = resolve_output(output);
  const auto summary = mreb::load_summary(input);

  std::optional<ChainDump> dump;
  mreb::ChainSink sink;
  if (!dump_chain.empty()) {
    dump.emplace(resolve_output(dump_chain));
    sink = dump->sink();
  }

  const auto result = mreb::fit_summary(summary, opts.prior, opts.settings, sink);
  write_estimate_csv(out, "mr-eb", result);
  write_trace_csv(out.string() + ".trace.csv", result);

  Manifest manifest("estimate-summary");
  manifest.set("input", input);
  manifest.set("output", output);
  manifest.set("J", static_cast<std::uint64_t>(summary.J()));
  manifest.set_estimation(opts);
  manifest.write(out);

  std::cout << "beta_hat = " << mreb::format_double(result.beta_hat) << "\n";
  return 0;
}

int run_simulate(const mreb::SimulationScenario& sc, const std::string& output,
                 const std::string& truth_path) {
  const fs::path out = resolve_output(output);
  const auto [data, truth] = mreb::simulate(sc);
  mreb::save_individual(out, data);

  if (!truth_path.empty()) {
    const fs::path tpath = resolve_output(truth_path);
    std::ofstream tout(tpath);
    if (!tout) throw mreb::DataError("cannot write truth file: " + tpath.string());
    tout << "gamma,alpha,xi\n";
    for (mreb::Index j = 0; j < sc.J; ++j) {
      tout << mreb::format_double(truth.gamma[j]) << "," << mreb::format_double(truth.alpha[j])
           << "," << truth.xi[j] << "\n";
    }
  }

  Manifest manifest("simulate");
  manifest.set("output", output);
  manifest.set("truth", truth_path);
  manifest.set("n", static_cast<std::uint64_t>(sc.n));
  manifest.set("J", static_cast<std::uint64_t>(sc.J));
  manifest.set("beta", sc.beta);
  manifest.set("mu_alpha", sc.mu_alpha);
  manifest.set("p0", sc.p0);
  manifest.set("inside", sc.inside_ok);
  manifest.set("cov_v", sc.cov_v);
  manifest.set("cov_eps", sc.cov_eps);
  manifest.set("cov_v_eps", sc.cov_v_eps);
  manifest.set("gamma_min", sc.gamma_min);
  manifest.set("gamma_max", sc.gamma_max);
  manifest.set("seed", sc.seed);
  manifest.write(out);
  return 0;
}

int run_grid_cmd(const std::string& spec_path, const std::string& output, const CLI::App* cmd,
                 const EstimationFlags& flags, int replicates_flag,
                 const std::string& estimators_flag, int threads) {
  mreb::GridDefinition grid = mreb::load_grid_spec(spec_path);
  if (cmd->count("--replicates") > 0) grid.replicates = replicates_flag;
  if (cmd->count("--estimators") > 0) {
    grid.estimators.clear();
    std::string token;
    std::stringstream stream(estimators_flag);
    while (std::getline(stream, token, ',')) {
      if (!token.empty()) grid.estimators.push_back(mreb::parse_estimator(token));
    }
  }
  const mreb::EstimationOptions opts = resolve_estimation(cmd, flags);
  const fs::path out = resolve_output(output);

  const auto table = mreb::run_grid(grid.scenarios, grid.replicates, grid.estimators, opts.prior,
                                    opts.settings, threads);

  std::ofstream fout(out);
  if (!fout) throw mreb::DataError("cannot write grid results: " + out.string());
  fout << "n,J,beta,mu_alpha,p0,inside,estimator,mse,mean_c_double_star,failed_replicates\n";
  for (const auto& cell : table) {
    fout << cell.scenario.n << "," << cell.scenario.J << ","
         << mreb::format_double(cell.scenario.beta) << ","
         << mreb::format_double(cell.scenario.mu_alpha) << ","
         << mreb::format_double(cell.scenario.p0) << "," << (cell.scenario.inside_ok ? 1 : 0)
         << "," << mreb::estimator_name(cell.estimator) << "," << csv_value(cell.mse) << ","
         << csv_value(cell.mean_c_double_star) << "," << cell.failed_replicates << "\n";
  }

  Manifest manifest("grid");
  manifest.set("spec", spec_path);
  manifest.set("output", output);
  manifest.set("replicates", grid.replicates);
  manifest.set("scenarios", static_cast<std::uint64_t>(grid.scenarios.size()));
  std::string names;
  for (const auto kind : grid.estimators) {
    if (!names.empty()) names += ",";
    names += mreb::estimator_name(kind);
  }
  manifest.set("estimators", names);
  manifest.set("threads", threads);
  manifest.set("grid_seed", grid.seed);
  manifest.set_estimation(opts);
  manifest.write(out);
  return 0;
}

int run_prior_sample(double p0, double tau2, double nu0, double mu_alpha, std::int64_t count,
                     std::uint64_t seed, const std::string& output) {
  const fs::path out = resolve_output(output);
  const mreb::Vector draws =
      mreb::sample_mixture_prior(mu_alpha, tau2, nu0, p0, static_cast<mreb::Index>(count), seed);
  std::ofstream fout(out);
  if (!fout) throw mreb::DataError("cannot write prior draws: " + out.string());
  fout << "alpha\n";
  for (mreb::Index i = 0; i < draws.size(); ++i) fout << mreb::format_double(draws[i]) << "\n";

  Manifest manifest("prior-sample");
  manifest.set("output", output);
  manifest.set("p0", p0);
  manifest.set("tau2", tau2);
  manifest.set("nu0", nu0);
  manifest.set("mu_alpha", mu_alpha);
  manifest.set("count", static_cast<std::uint64_t>(count));
  manifest.set("seed", seed);
  manifest.write(out);
  return 0;
}

int run_diagnose(const std::string& input, const std::string& output, double tau2,
                 double sigma2_eta, const std::string& mode, const std::string& xi_csv,
                 double nu0) {
  const fs::path out = resolve_output(output);
  const auto data = mreb::load_individual(input);
  const auto fit = mreb::first_stage(data);

  mreb::DiagnosticsReport report;
  if (mode == "single") {
    report = mreb::diagnostics(data, fit, tau2, sigma2_eta, mreb::PriorKind::single_gaussian);
  } else {
    if (xi_csv.empty()) throw mreb::ConfigError("diagnose: mixture mode requires --xi");
    std::vector<int> bits;
    std::stringstream stream(xi_csv);
    std::string token;
    while (std::getline(stream, token, ',')) {
      if (token == "0") {
        bits.push_back(0);
      } else if (token == "1") {
        bits.push_back(1);
      } else {
        throw mreb::ConfigError("diagnose: --xi entries must be 0 or 1");
      }
    }
    if (static_cast<mreb::Index>(bits.size()) != data.J) {
      throw mreb::ConfigError("diagnose: --xi length must equal the instrument count");
    }
    mreb::IntVector xi(data.J);
    for (mreb::Index j = 0; j < data.J; ++j) xi[j] = bits[static_cast<std::size_t>(j)];
    report = mreb::diagnostics(data, fit, tau2, sigma2_eta, mreb::PriorKind::mixture, &xi, nu0);
  }

  std::ofstream fout(out);
  if (!fout) throw mreb::DataError("cannot write diagnostics: " + out.string());
  fout << "c_star,c_double_star,assumption_ok\n";
  fout << mreb::format_double(report.c_star) << "," << mreb::format_double(report.c_double_star)
       << "," << (report.assumption_ok ? 1 : 0) << "\n";

  Manifest manifest("diagnose");
  manifest.set("input", input);
  manifest.set("output", output);
  manifest.set("tau2", tau2);
  manifest.set("sigma2_eta", sigma2_eta);
  manifest.set("mode", mode);
  manifest.set("xi", xi_csv);
  manifest.set("nu0", nu0);
  manifest.write(out);

  std::cout << "c_star = " << mreb::format_double(report.c_star) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal-effect estimation for Mendelian randomization with possibly invalid "
               "instruments"};
  app.require_subcommand(1);

  auto* est = app.add_subcommand("estimate", "Fit an estimator to individual-level data");
  std::string est_input;
  std::string est_output = "estimate.csv";
  std::string est_estimator = "mr-eb";
  std::string est_dump;
  EstimationFlags est_flags;
  est->add_option("--input", est_input, "Individual CSV (z1,...,zJ,d,y)")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--output", est_output, "Results CSV path");
  est->add_option("--estimator", est_estimator, "tsls, eb-single, or mr-eb")
      ->check(CLI::IsMember({"tsls", "eb-single", "mr-eb"}));
  est->add_option("--dump-chain", est_dump, "Write every Gibbs sweep to this CSV");
  add_estimation_options(est, est_flags);

  auto* ests =
      app.add_subcommand("estimate-summary", "Fit the mixture estimator to summary statistics");
  std::string ests_input;
  std::string ests_output = "estimate-summary.csv";
  std::string ests_dump;
  EstimationFlags ests_flags;
  ests->add_option("--input", ests_input, "Summary CSV (gamma2,omega,sigma2_omega)")
      ->required()
      ->check(CLI::ExistingFile);
  ests->add_option("--output", ests_output, "Results CSV path");
  ests->add_option("--dump-chain", ests_dump, "Write every Gibbs sweep to this CSV");
  add_estimation_options(ests, ests_flags);

  auto* sim = app.add_subcommand("simulate", "Draw one synthetic dataset");
  mreb::SimulationScenario scenario;
  std::string sim_output = "simulated.csv";
  std::string sim_truth;
  sim->add_option("--n", scenario.n, "Observations");
  sim->add_option("--J", scenario.J, "Instruments");
  sim->add_option("--beta", scenario.beta, "True causal effect");
  sim->add_option("--mu-alpha", scenario.mu_alpha, "Mean direct effect of invalid instruments");
  sim->add_option("--p0", scenario.p0, "Proportion of invalid instruments");
  sim->add_flag("--inside,!--no-inside", scenario.inside_ok,
                "Whether instrument strength is independent of direct effects");
  sim->add_option("--cov-v", scenario.cov_v, "Var(v)");
  sim->add_option("--cov-eps", scenario.cov_eps, "Var(eps)");
  sim->add_option("--cov-v-eps", scenario.cov_v_eps, "Cov(v, eps)");
  sim->add_option("--gamma-min", scenario.gamma_min, "Lower instrument-strength bound");
  sim->add_option("--gamma-max", scenario.gamma_max, "Upper instrument-strength bound");
  sim->add_option("--seed", scenario.seed, "RNG seed");
  sim->add_option("--output", sim_output, "Dataset CSV path");
  sim->add_option("--truth", sim_truth, "Optional per-variant truth CSV path");

  auto* grid = app.add_subcommand("grid", "Run a scenario grid and report MSE per cell");
  std::string grid_spec;
  std::string grid_output = "grid.csv";
  std::string grid_estimators;
  int grid_replicates = 20;
  int grid_threads = static_cast<int>(std::thread::hardware_concurrency());
  EstimationFlags grid_flags;
  grid->add_option("--spec", grid_spec, "Grid spec file (flat key = value, lists sweep)")
      ->required()
      ->check(CLI::ExistingFile);
  grid->add_option("--output", grid_output, "MSE table CSV path");
  grid->add_option("--replicates", grid_replicates, "Replicates per cell (overrides spec)");
  grid->add_option("--estimators", grid_estimators, "Comma list of estimators (overrides spec)");
  grid->add_option("--threads", grid_threads, "Worker pool size");
  add_estimation_options(grid, grid_flags);

  auto* prior = app.add_subcommand("prior-sample", "Draw from the spike-and-slab prior");
  double ps_p0 = 0.8;
  double ps_tau2 = 0.01;
  double ps_nu0 = 0.001;
  double ps_mu = 0.2;
  std::int64_t ps_count = 10000;
  std::uint64_t ps_seed = 0;
  std::string ps_output = "prior-sample.csv";
  prior->add_option("--p0", ps_p0, "Slab weight");
  prior->add_option("--tau2", ps_tau2, "Slab variance");
  prior->add_option("--nu0", ps_nu0, "Spike-to-slab variance ratio");
  prior->add_option("--mu-alpha", ps_mu, "Slab location");
  prior->add_option("--count", ps_count, "Number of draws");
  prior->add_option("--seed", ps_seed, "RNG seed");
  prior->add_option("--output", ps_output, "Draws CSV path");

  auto* diag = app.add_subcommand("diagnose", "Report the regularity constants of a dataset");
  std::string diag_input;
  std::string diag_output = "diagnose.csv";
  double diag_tau2 = 0.0;
  double diag_s2 = 0.0;
  std::string diag_mode = "single";
  std::string diag_xi;
  double diag_nu0 = 0.001;
  diag->add_option("--input", diag_input, "Individual CSV")->required()->check(CLI::ExistingFile);
  diag->add_option("--tau2", diag_tau2, "Prior variance of the direct effects")->required();
  diag->add_option("--sigma2-eta", diag_s2, "Residual variance")->required();
  diag->add_option("--mode", diag_mode, "single or mixture")
      ->check(CLI::IsMember({"single", "mixture"}));
  diag->add_option("--xi", diag_xi, "Comma list of 0/1 selections (mixture mode)");
  diag->add_option("--nu0", diag_nu0, "Spike-to-slab variance ratio (mixture mode)");
  diag->add_option("--output", diag_output, "Report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*est) return run_estimate(est_input, est_output, est_estimator, est, est_flags, est_dump);
    if (*ests) return run_estimate_summary(ests_input, ests_output, ests, ests_flags, ests_dump);
    if (*sim) return run_simulate(scenario, sim_output, sim_truth);
    if (*grid) {
      return run_grid_cmd(grid_spec, grid_output, grid, grid_flags, grid_replicates,
                          grid_estimators, grid_threads);
    }
    if (*prior) {
      return run_prior_sample(ps_p0, ps_tau2, ps_nu0, ps_mu, ps_count, ps_seed, ps_output);
    }
    if (*diag) {
      return run_diagnose(diag_input, diag_output, diag_tau2, diag_s2, diag_mode, diag_xi,
                          diag_nu0);
    }
  } catch (const mreb::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mreb::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mreb::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
