#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mreb/io.hpp"
#include "mreb/rng.hpp"
#include "mreb/types.hpp"

namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& contents) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("loading centers every column") {
  const auto path = write_temp("core_center.csv", "z1,d,y\n1,1,2\n2,2,4\n3,3,6\n");
  const auto data = mreb::load_individual(path);
  REQUIRE(data.n == 3);
  REQUIRE(data.J == 1);
  REQUIRE(data.Z(0, 0) == -1.0);
  REQUIRE(data.Z(1, 0) == 0.0);
  REQUIRE(data.Z(2, 0) == 1.0);
  REQUIRE(data.D[0] == -1.0);
  REQUIRE(data.D[2] == 1.0);
  REQUIRE(data.Y[0] == -2.0);
  REQUIRE(data.Y[1] == 0.0);
  REQUIRE(data.Y[2] == 2.0);
}

TEST_CASE("missing value reports a non-finite entry with context") {
  const auto path = write_temp("core_missing.csv", "z1,d,y\n1,1,2\n2,2,\n3,3,6\n");
  REQUIRE_THROWS_MATCHES(mreb::load_individual(path), mreb::DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("non-finite entry") &&
                             Catch::Matchers::ContainsSubstring("row 2") &&
                             Catch::Matchers::ContainsSubstring("column y")));
}

TEST_CASE("nan in the file is rejected as non-finite") {
  const auto path = write_temp("core_nan.csv", "z1,d,y\n1,1,2\nnan,2,4\n3,3,6\n");
  REQUIRE_THROWS_MATCHES(mreb::load_individual(path), mreb::DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("non-finite entry")));
}

TEST_CASE("too few observations for the instrument count is rejected") {
  std::string contents = "z1,z2,z3,z4,z5,z6,d,y\n";
  for (int i = 0; i < 5; ++i) contents += "1,2,3,4,5,6,1,1\n";
  const auto path = write_temp("core_rank.csv", contents);
  REQUIRE_THROWS_MATCHES(
      mreb::load_individual(path), mreb::DataError,
      Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("n <= J")));
}

TEST_CASE("header names are checked") {
  const auto path = write_temp("core_header.csv", "z1,z3,d,y\n1,2,1,1\n");
  REQUIRE_THROWS_AS(mreb::load_individual(path), mreb::DataError);
}

TEST_CASE("centering is exactly idempotent and kills constant columns") {
  mreb::SeededGenerator gen(77);
  for (int rep = 0; rep < 20; ++rep) {
    mreb::IndividualDataset data;
    data.n = 23;
    data.J = 4;
    data.Z.resize(data.n, data.J);
    data.D.resize(data.n);
    data.Y.resize(data.n);
    for (mreb::Index i = 0; i < data.n; ++i) {
      for (mreb::Index j = 0; j < data.J; ++j) data.Z(i, j) = mreb::draw_uniform(gen, -5, 5);
      data.D[i] = mreb::draw_uniform(gen, -5, 5);
      data.Y[i] = mreb::draw_uniform(gen, -5, 5);
    }
    data.Z.col(1).setConstant(3.25);  // constant column must become exactly zero

    const auto once = mreb::center_columns(data);
    const auto twice = mreb::center_columns(once);
    REQUIRE((once.Z.array() == twice.Z.array()).all());
    REQUIRE((once.D.array() == twice.D.array()).all());
    REQUIRE((once.Y.array() == twice.Y.array()).all());
    REQUIRE(once.Z.col(1).cwiseAbs().maxCoeff() == 0.0);
    for (mreb::Index j = 0; j < data.J; ++j) {
      REQUIRE(std::abs(once.Z.col(j).mean()) < 1e-10);
    }
    REQUIRE(std::abs(once.D.mean()) < 1e-10);
    REQUIRE(std::abs(once.Y.mean()) < 1e-10);
  }
}

TEST_CASE("centering subtracts the column mean") {
  mreb::IndividualDataset data;
  data.n = 3;
  data.J = 1;
  data.Z.resize(3, 1);
  data.Z << 4, 0, 2;
  data.D = mreb::Vector::Zero(3);
  data.Y = mreb::Vector::Zero(3);
  const auto centered = mreb::center_columns(data);
  REQUIRE(centered.Z(0, 0) == 2.0);
  REQUIRE(centered.Z(1, 0) == -2.0);
  REQUIRE(centered.Z(2, 0) == 0.0);
}

TEST_CASE("save and load round-trip bit for bit") {
  mreb::SeededGenerator gen(123);
  mreb::IndividualDataset data;
  data.n = 40;
  data.J = 3;
  data.Z.resize(data.n, data.J);
  data.D.resize(data.n);
  data.Y.resize(data.n);
  for (mreb::Index i = 0; i < data.n; ++i) {
    for (mreb::Index j = 0; j < data.J; ++j) data.Z(i, j) = mreb::draw_normal(gen, 0, 2.3);
    data.D[i] = mreb::draw_normal(gen, 0, 1.7);
    data.Y[i] = mreb::draw_normal(gen, 0, 0.9);
  }
  data = mreb::center_columns(data);

  const fs::path path = fs::temp_directory_path() / "core_roundtrip.csv";
  mreb::save_individual(path, data);
  const auto loaded = mreb::load_individual(path);
  REQUIRE((loaded.Z.array() == data.Z.array()).all());
  REQUIRE((loaded.D.array() == data.D.array()).all());
  REQUIRE((loaded.Y.array() == data.Y.array()).all());
}

TEST_CASE("summary loading maps fields directly") {
  const auto path = write_temp("core_summary.csv",
                               "gamma2,omega,sigma2_omega\n0.1,0.05,0.01\n0.2,-0.03,0.02\n");
  const auto summary = mreb::load_summary(path);
  REQUIRE(summary.J() == 2);
  REQUIRE(summary.gamma2[0] == 0.1);
  REQUIRE(summary.gamma2[1] == 0.2);
  REQUIRE(summary.omega[1] == -0.03);
  REQUIRE(summary.sigma2_omega[1] == 0.02);
}

TEST_CASE("summary with a zero variance is rejected") {
  const auto path =
      write_temp("core_summary_bad.csv", "gamma2,omega,sigma2_omega\n0.1,0.05,0\n");
  REQUIRE_THROWS_MATCHES(mreb::load_summary(path), mreb::DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("nonpositive variance")));
}

TEST_CASE("summary with no variants is rejected") {
  const auto path = write_temp("core_summary_empty.csv", "gamma2,omega,sigma2_omega\n");
  REQUIRE_THROWS_MATCHES(
      mreb::load_summary(path), mreb::DataError,
      Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("no variants")));
}
