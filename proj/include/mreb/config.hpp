#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mreb/errors.hpp"
#include "mreb/grid.hpp"
#include "mreb/simulate.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Flat `key = value` file: one pair per line, `#` comments, blank lines
/// ignored. Values may be comma-separated lists where the consumer allows it.
class KeyValueFile {
 public:
  static KeyValueFile load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    KeyValueFile kv;
    kv.name_ = path.filename().string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(kv.name_ + ":" + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(kv.name_ + ":" + std::to_string(lineno) + ": empty key");
      }
      if (!kv.values_.emplace(key, value).second) {
        throw ConfigError(kv.name_ + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
    }
    return kv;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(it->second, key);
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_int(it->second, key);
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError(name_ + ": key '" + key + "': cannot parse '" + s + "' as an unsigned integer");
    }
    return v;
  }

  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& tok : split_list(it->second)) out.push_back(parse_double(tok, key));
    if (out.empty()) throw ConfigError(name_ + ": key '" + key + "': empty list");
    return out;
  }

  std::vector<bool> get_bool_list(const std::string& key, std::vector<bool> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<bool> out;
    for (const auto& tok : split_list(it->second)) out.push_back(parse_bool(tok, key));
    if (out.empty()) throw ConfigError(name_ + ": key '" + key + "': empty list");
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto out = split_list(it->second);
    if (out.empty()) throw ConfigError(name_ + ": key '" + key + "': empty list");
    return out;
  }

  /// Rejects any key outside the allowed set; typos never pass silently.
  void require_known_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
      if (allowed.count(key) == 0) {
        throw ConfigError(name_ + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      const auto comma = s.find(',', start);
      const std::string tok =
          trim(comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start));
      if (!tok.empty()) out.push_back(tok);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  double parse_double(const std::string& s, const std::string& key) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError(name_ + ": key '" + key + "': cannot parse '" + s + "' as a number");
    }
    return v;
  }

  std::int64_t parse_int(const std::string& s, const std::string& key) const {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError(name_ + ": key '" + key + "': cannot parse '" + s + "' as an integer");
    }
    return v;
  }

  bool parse_bool(const std::string& s, const std::string& key) const {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError(name_ + ": key '" + key + "': cannot parse '" + s + "' as a boolean");
  }

  std::string name_;
  std::map<std::string, std::string> values_;
};

/// Estimation settings shared by the CLI and the grid runner.
struct EstimationOptions {
  PriorConfig prior;
  McemSettings settings;
};

inline EstimationOptions apply_estimation_config(const KeyValueFile& kv,
                                                 EstimationOptions base = {}) {
  kv.require_known_keys({"nu0", "nu1", "nu2", "nu3", "nu4", "beta_init", "mu_alpha_init",
                         "p0_init", "mc_samples", "burn_in", "max_iters", "tol", "seed"});
  base.prior.nu0 = kv.get_double("nu0", base.prior.nu0);
  base.prior.nu1 = kv.get_double("nu1", base.prior.nu1);
  base.prior.nu2 = kv.get_double("nu2", base.prior.nu2);
  base.prior.nu3 = kv.get_double("nu3", base.prior.nu3);
  base.prior.nu4 = kv.get_double("nu4", base.prior.nu4);
  base.prior.beta_init = kv.get_double("beta_init", base.prior.beta_init);
  base.prior.mu_alpha_init = kv.get_double("mu_alpha_init", base.prior.mu_alpha_init);
  base.prior.p0_init = kv.get_double("p0_init", base.prior.p0_init);
  base.settings.mc_samples = static_cast<int>(kv.get_int("mc_samples", base.settings.mc_samples));
  base.settings.burn_in = static_cast<int>(kv.get_int("burn_in", base.settings.burn_in));
  base.settings.max_iters = static_cast<int>(kv.get_int("max_iters", base.settings.max_iters));
  base.settings.tol = kv.get_double("tol", base.settings.tol);
  base.settings.seed = kv.get_uint("seed", base.settings.seed);
  return base;
}

inline EstimationOptions load_estimation_config(const std::filesystem::path& path) {
  return apply_estimation_config(KeyValueFile::load(path));
}

/// A grid specification: scalar keys set shared scenario fields, list-valued
/// keys (n, J, beta, mu_alpha, p0, inside) are swept in a full cross product.
struct GridDefinition {
  std::vector<SimulationScenario> scenarios;
  int replicates = 20;
  std::vector<EstimatorKind> estimators;
  std::uint64_t seed = 0;
};

inline GridDefinition load_grid_spec(const std::filesystem::path& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  kv.require_known_keys({"n", "J", "beta", "mu_alpha", "p0", "inside", "cov_v", "cov_eps",
                         "cov_v_eps", "gamma_min", "gamma_max", "seed", "replicates",
                         "estimators"});

  GridDefinition def;
  def.seed = kv.get_uint("seed", 0);
  def.replicates = static_cast<int>(kv.get_int("replicates", 20));
  for (const auto& name : kv.get_string_list("estimators", {"tsls", "eb-single", "mr-eb"})) {
    def.estimators.push_back(parse_estimator(name));
  }

  SimulationScenario base;
  base.cov_v = kv.get_double("cov_v", base.cov_v);
  base.cov_eps = kv.get_double("cov_eps", base.cov_eps);
  base.cov_v_eps = kv.get_double("cov_v_eps", base.cov_v_eps);
  base.gamma_min = kv.get_double("gamma_min", base.gamma_min);
  base.gamma_max = kv.get_double("gamma_max", base.gamma_max);

  const auto ns = kv.get_double_list("n", {static_cast<double>(base.n)});
  const auto js = kv.get_double_list("J", {static_cast<double>(base.J)});
  const auto betas = kv.get_double_list("beta", {base.beta});
  const auto mus = kv.get_double_list("mu_alpha", {base.mu_alpha});
  const auto p0s = kv.get_double_list("p0", {base.p0});
  const auto insides = kv.get_bool_list("inside", {base.inside_ok});

  // Fixed nesting order keeps scenario indices (and so derived seeds) stable.
  std::uint64_t index = 0;
  for (const double n : ns) {
    for (const double J : js) {
      for (const double beta : betas) {
        for (const double mu : mus) {
          for (const double p0 : p0s) {
            for (const bool inside : insides) {
              SimulationScenario sc = base;
              sc.n = static_cast<Index>(n);
              sc.J = static_cast<Index>(J);
              sc.beta = beta;
              sc.mu_alpha = mu;
              sc.p0 = p0;
              sc.inside_ok = inside;
              sc.seed = SeededGenerator::derive_seed(def.seed, index++);
              validate(sc);
              def.scenarios.push_back(sc);
            }
          }
        }
      }
    }
  }
  if (def.scenarios.empty()) throw ConfigError("grid spec: no scenarios defined");
  return def;
}

}  // namespace mreb
