#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "garchfis/garch.hpp"

// Deterministic generators for test fixtures. splitmix64 + Box-Muller keeps
// the draws identical across standard libraries and platforms.
namespace testsupport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Eigen::VectorXd simulate_garch_returns(int n,
                                              const garchfis::GarchParams& truth,
                                              std::uint64_t seed,
                                              int burnin = 500) {
  Rng rng(seed);
  Eigen::VectorXd returns(n);
  double sigma2 = truth.unconditional_variance();
  double eps_prev = 0.0;
  for (int t = 0; t < burnin + n; ++t) {
    sigma2 = truth.omega + truth.alpha * eps_prev * eps_prev + truth.beta * sigma2;
    const double eps = std::sqrt(sigma2) * rng.normal();
    eps_prev = eps;
    if (t >= burnin) returns(t - burnin) = truth.mu + eps;
  }
  return returns;
}

/// Geometric trend plus GARCH percent-return noise:
/// P_t = P_{t-1} * (1 + (trend_percent + eps_t) / 100).
inline Eigen::VectorXd trend_garch_prices(int n, double trend_percent,
                                          const garchfis::GarchParams& noise,
                                          double initial_price,
                                          std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd prices(n);
  prices(0) = initial_price;
  double sigma2 = noise.unconditional_variance();
  double eps_prev = 0.0;
  for (int t = 1; t < n; ++t) {
    sigma2 = noise.omega + noise.alpha * eps_prev * eps_prev + noise.beta * sigma2;
    const double eps = std::sqrt(sigma2) * rng.normal();
    eps_prev = eps;
    prices(t) = prices(t - 1) * (1.0 + (trend_percent + eps) / 100.0);
  }
  return prices;
}

/// Simple positive random walk for property tests.
inline Eigen::VectorXd random_walk_prices(int n, double initial_price,
                                          double step_scale, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd prices(n);
  double level = initial_price;
  prices(0) = level;
  for (int t = 1; t < n; ++t) {
    level = std::max(level + step_scale * rng.normal(), 0.05 * initial_price);
    prices(t) = level;
  }
  return prices;
}

}  // namespace testsupport
