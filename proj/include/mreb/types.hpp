#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "mreb/errors.hpp"

namespace mreb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Which prior hierarchy an estimator or diagnostic refers to.
enum class PriorKind { single_gaussian, mixture };

/// Individual-level observations: n subjects by J instruments. Once loaded,
/// every column of Z and the D/Y vectors are mean-centered, so downstream
/// formulas carry no intercepts.
struct IndividualDataset {
  Matrix Z;  // n x J instrument matrix
  Vector D;  // exposure, length n
  Vector Y;  // outcome, length n
  Index n = 0;
  Index J = 0;
};

/// Per-variant association summaries: exposure associations estimated on an
/// independent sample, outcome associations, and the variance of each outcome
/// association.
struct SummaryDataset {
  Vector gamma2;
  Vector omega;
  Vector sigma2_omega;

  Index J() const { return gamma2.size(); }
};

/// Hyperparameters of the prior hierarchies plus starting values for the
/// marginal estimates.
struct PriorConfig {
  double nu0 = 0.001;  // spike-to-slab variance ratio (mixture prior only)
  double nu1 = 2.0;    // shape of the Gamma prior on 1/tau^2
  double nu2 = 0.4;    // rate of the Gamma prior on 1/tau^2
  double nu3 = 1e-4;   // shape of the Gamma prior on 1/sigma2_eta
  double nu4 = 1e-4;   // rate of the Gamma prior on 1/sigma2_eta
  double beta_init = 0.0;
  double mu_alpha_init = 0.0;
  double p0_init = 0.5;  // mixture prior only
};

/// Monte Carlo EM controls.
struct McemSettings {
  int mc_samples = 500;  // Gibbs draws kept per E-step
  int burn_in = 100;     // draws discarded at the start of each E-step chain
  int max_iters = 200;
  double tol = 1e-3;  // relative-change convergence threshold
  std::uint64_t seed = 0;
};

inline void validate(const PriorConfig& prior) {
  if (!(prior.nu0 > 0.0 && prior.nu0 < 1.0)) throw ConfigError("prior: nu0 must lie in (0, 1)");
  if (!(prior.nu1 > 0.0 && prior.nu2 > 0.0 && prior.nu3 > 0.0 && prior.nu4 > 0.0)) {
    throw ConfigError("prior: nu1..nu4 must be positive");
  }
  if (!(prior.p0_init >= 0.0 && prior.p0_init <= 1.0)) {
    throw ConfigError("prior: p0_init must lie in [0, 1]");
  }
  if (!std::isfinite(prior.beta_init) || !std::isfinite(prior.mu_alpha_init)) {
    throw ConfigError("prior: initial values must be finite");
  }
}

inline void validate(const McemSettings& settings) {
  if (settings.mc_samples < 1) throw ConfigError("mcem: mc_samples must be >= 1");
  if (settings.burn_in < 0) throw ConfigError("mcem: burn_in must be >= 0");
  if (settings.max_iters < 1) throw ConfigError("mcem: max_iters must be >= 1");
  if (!(settings.tol > 0.0)) throw ConfigError("mcem: tol must be > 0");
}

/// Dimension, rank-precondition, and finiteness checks. Error messages carry
/// 1-based row/column context matching the source CSV layout.
inline void validate(const IndividualDataset& data) {
  if (data.Z.rows() != data.n || data.D.size() != data.n || data.Y.size() != data.n) {
    throw DataError("individual data: dimension mismatch between Z, D, Y and n");
  }
  if (data.Z.cols() != data.J) {
    throw DataError("individual data: dimension mismatch between Z and J");
  }
  if (data.J < 1) throw DataError("individual data: no instrument columns");
  if (data.n <= data.J) {
    throw DataError("individual data: n <= J (n = " + std::to_string(data.n) +
                    ", J = " + std::to_string(data.J) +
                    "); the first stage needs n >= J + 1");
  }
  for (Index i = 0; i < data.n; ++i) {
    for (Index j = 0; j < data.J; ++j) {
      if (!std::isfinite(data.Z(i, j))) {
        throw DataError("individual data: non-finite entry at row " + std::to_string(i + 1) +
                        ", column z" + std::to_string(j + 1));
      }
    }
    if (!std::isfinite(data.D[i])) {
      throw DataError("individual data: non-finite entry at row " + std::to_string(i + 1) +
                      ", column d");
    }
    if (!std::isfinite(data.Y[i])) {
      throw DataError("individual data: non-finite entry at row " + std::to_string(i + 1) +
                      ", column y");
    }
  }
}

inline void validate(const SummaryDataset& summary) {
  const Index J = summary.gamma2.size();
  if (J < 1) throw DataError("summary data: no variants");
  if (summary.omega.size() != J || summary.sigma2_omega.size() != J) {
    throw DataError("summary data: column length mismatch");
  }
  for (Index j = 0; j < J; ++j) {
    if (!std::isfinite(summary.gamma2[j]) || !std::isfinite(summary.omega[j]) ||
        !std::isfinite(summary.sigma2_omega[j])) {
      throw DataError("summary data: non-finite entry at row " + std::to_string(j + 1));
    }
    if (!(summary.sigma2_omega[j] > 0.0)) {
      throw DataError("summary data: nonpositive variance at row " + std::to_string(j + 1));
    }
  }
}

namespace detail {

// Subtracts the column mean unless the column already passes the centering
// tolerance; skipping makes centering exactly idempotent.
template <typename Col>
void center_column(Col col) {
  constexpr double tol = 1e-10;
  const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
  const double mean = col.mean();
  if (std::abs(mean) > tol * scale) col.array() -= mean;
}

}  // namespace detail

/// Mean-centers every column of Z together with D and Y. Idempotent: applying
/// it to already-centered data returns the input unchanged.
inline IndividualDataset center_columns(IndividualDataset data) {
  if (data.n == 0) return data;
  if (data.Z.rows() != data.n || data.Z.cols() != data.J || data.D.size() != data.n ||
      data.Y.size() != data.n) {
    throw DataError("center: dimension mismatch between Z, D, Y and (n, J)");
  }
  for (Index j = 0; j < data.J; ++j) detail::center_column(data.Z.col(j));
  detail::center_column(data.D.head(data.n));
  detail::center_column(data.Y.head(data.n));
  return data;
}

}  // namespace mreb
