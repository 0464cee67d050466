#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "mreb/config.hpp"

namespace fs = std::filesystem;

namespace {

fs::path write_cfg(const std::string& name, const std::string& contents) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("key-value parsing handles comments, blanks, and whitespace") {
  const auto path = write_cfg("cfg_basic.cfg",
                              "# leading comment\n"
                              "\n"
                              "  nu1 =  3.5  # trailing comment\n"
                              "seed = 42\n");
  const auto kv = mreb::KeyValueFile::load(path);
  REQUIRE(kv.get_double("nu1", 0.0) == 3.5);
  REQUIRE(kv.get_uint("seed", 0) == 42);
  REQUIRE(kv.get_double("absent", 1.25) == 1.25);
}

TEST_CASE("duplicate keys and malformed lines are rejected") {
  REQUIRE_THROWS_AS(
      mreb::KeyValueFile::load(write_cfg("cfg_dup.cfg", "a = 1\na = 2\n")), mreb::ConfigError);
  REQUIRE_THROWS_AS(
      mreb::KeyValueFile::load(write_cfg("cfg_noeq.cfg", "just some text\n")),
      mreb::ConfigError);
  REQUIRE_THROWS_AS(
      mreb::KeyValueFile::load(write_cfg("cfg_nokey.cfg", "= 3\n")), mreb::ConfigError);
}

TEST_CASE("estimation config rejects unknown keys and applies known ones") {
  const auto good = write_cfg("cfg_est.cfg", "nu2 = 0.7\nmc_samples = 123\ntol = 0.01\n");
  const auto opts = mreb::load_estimation_config(good);
  REQUIRE(opts.prior.nu2 == 0.7);
  REQUIRE(opts.settings.mc_samples == 123);
  REQUIRE(opts.settings.tol == 0.01);
  REQUIRE(opts.prior.nu1 == 2.0);  // untouched default

  const auto bad = write_cfg("cfg_est_bad.cfg", "nu9 = 0.7\n");
  REQUIRE_THROWS_AS(mreb::load_estimation_config(bad), mreb::ConfigError);
}

TEST_CASE("grid specs cross list-valued keys in a fixed order") {
  const auto path = write_cfg("cfg_grid.cfg",
                              "n = 200\nJ = 5\nbeta = 0, 0.2\nmu_alpha = -0.2, 0.2\n"
                              "p0 = 0.5\ninside = true, false\nseed = 9\n"
                              "replicates = 4\nestimators = tsls, mr-eb\n");
  const auto def = mreb::load_grid_spec(path);
  REQUIRE(def.scenarios.size() == 8);
  REQUIRE(def.replicates == 4);
  REQUIRE(def.estimators.size() == 2);
  // Innermost sweep is the strength-independence flag, then p0, mu, beta.
  REQUIRE(def.scenarios[0].beta == 0.0);
  REQUIRE(def.scenarios[0].mu_alpha == -0.2);
  REQUIRE(def.scenarios[0].inside_ok);
  REQUIRE_FALSE(def.scenarios[1].inside_ok);
  REQUIRE(def.scenarios[2].mu_alpha == 0.2);
  REQUIRE(def.scenarios[4].beta == 0.2);
  // Scenario seeds are derived from the base seed and the cell index.
  REQUIRE(def.scenarios[0].seed == mreb::SeededGenerator::derive_seed(9, 0));
  REQUIRE(def.scenarios[7].seed == mreb::SeededGenerator::derive_seed(9, 7));

  const auto rerun = mreb::load_grid_spec(path);
  for (std::size_t i = 0; i < 8; ++i) REQUIRE(rerun.scenarios[i].seed == def.scenarios[i].seed);
}

TEST_CASE("grid specs propagate scalar noise and strength settings") {
  const auto path = write_cfg("cfg_grid2.cfg",
                              "n = 100\nJ = 4\ncov_v = 2\ncov_eps = 1.5\ncov_v_eps = 0.3\n"
                              "gamma_min = 0.05\ngamma_max = 0.4\n");
  const auto def = mreb::load_grid_spec(path);
  REQUIRE(def.scenarios.size() == 1);
  REQUIRE(def.scenarios[0].cov_v == 2.0);
  REQUIRE(def.scenarios[0].cov_eps == 1.5);
  REQUIRE(def.scenarios[0].cov_v_eps == 0.3);
  REQUIRE(def.scenarios[0].gamma_min == 0.05);
  REQUIRE(def.scenarios[0].gamma_max == 0.4);
  REQUIRE(def.replicates == 20);  // desk-scale default
}

TEST_CASE("invalid grid values surface as config errors") {
  REQUIRE_THROWS_AS(
      mreb::load_grid_spec(write_cfg("cfg_grid_bad.cfg", "n = 5\nJ = 10\n")),
      mreb::ConfigError);
  REQUIRE_THROWS_AS(
      mreb::load_grid_spec(write_cfg("cfg_grid_bad2.cfg", "p0 = 1.5\n")), mreb::ConfigError);
  REQUIRE_THROWS_AS(
      mreb::load_grid_spec(write_cfg("cfg_grid_bad3.cfg", "estimators = ivw\n")),
      mreb::ConfigError);
}
