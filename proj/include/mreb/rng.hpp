#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace mreb {

/// Deterministic counter-based generator. Output i is a bijective hash of
/// seed + i * gamma, so a stream is a pure function of its seed: identical
/// seeds replay identical streams, and independent substreams are obtained
/// by hashing a label into a fresh seed rather than by jumping ahead.
class SeededGenerator {
 public:
  using result_type = std::uint64_t;

  explicit SeededGenerator(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Hash (seed, label) into the seed of an unrelated stream. Distinct labels
  /// give streams that behave as independent.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    std::uint64_t h = mix(seed ^ 0x94d049bb133111ebULL);
    h = mix(h + (label + 1) * 0x9e3779b97f4a7c15ULL);
    return h;
  }

  /// Child generator keyed off the current state and a label. Does not
  /// advance this generator.
  [[nodiscard]] SeededGenerator split(std::uint64_t label) const {
    return SeededGenerator(derive_seed(state_, label));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Uniform on [0, 1), 53-bit resolution.
inline double draw_unit_uniform(SeededGenerator& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1]; safe as a log or power argument.
inline double draw_unit_uniform_pos(SeededGenerator& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

inline double draw_uniform(SeededGenerator& gen, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("draw_uniform: requires a < b");
  return a + (b - a) * draw_unit_uniform(gen);
}

/// Standard normal via Box-Muller; consumes exactly two generator words.
inline double draw_standard_normal(SeededGenerator& gen) {
  const double u1 = draw_unit_uniform_pos(gen);
  const double u2 = draw_unit_uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double draw_normal(SeededGenerator& gen, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("draw_normal: requires sigma2 > 0");
  return mu + std::sqrt(sigma2) * draw_standard_normal(gen);
}

/// Gamma draw parameterized by shape and RATE, i.e. mean = shape / rate.
/// Marsaglia-Tsang squeeze for shape >= 1, with the standard power boost for
/// shape < 1.
inline double draw_gamma(SeededGenerator& gen, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("draw_gamma: requires shape > 0 and rate > 0");
  }
  if (shape < 1.0) {
    const double boost = std::pow(draw_unit_uniform_pos(gen), 1.0 / shape);
    return draw_gamma(gen, shape + 1.0, rate) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = draw_standard_normal(gen);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = draw_unit_uniform(gen);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

inline bool draw_bernoulli(SeededGenerator& gen, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("draw_bernoulli: requires p in [0, 1]");
  return draw_unit_uniform(gen) < p;
}

/// Multivariate normal draw given a lower-triangular Cholesky factor of the
/// covariance: mean + L z with z iid standard normal.
inline Eigen::VectorXd draw_mvn_chol(SeededGenerator& gen, const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& chol_factor) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = draw_standard_normal(gen);
  return mean + chol_factor * z;
}

}  // namespace mreb
