#pragma once

#include <Eigen/Dense>

#include "garchfis/errors.hpp"

namespace garchfis {

/// Daily price levels indexed by position (0..T-1, gapless). Values are
/// strictly positive and finite; validated at construction.
class PriceSeries {
 public:
  explicit PriceSeries(Eigen::VectorXd values);

  [[nodiscard]] Eigen::Index size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return values_(i); }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }

  /// Contiguous view of `length` values ending at index `end` inclusive.
  [[nodiscard]] Eigen::Ref<const Eigen::VectorXd> window_ending_at(
      Eigen::Index end, Eigen::Index length) const;

 private:
  Eigen::VectorXd values_;
};

/// Percent returns, one fewer element than the source prices.
class ReturnSeries {
 public:
  explicit ReturnSeries(Eigen::VectorXd values);

  [[nodiscard]] Eigen::Index size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return values_(i); }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// Z-score parameters, always taken from the training partition.
struct NormalizationStats {
  double mean = 0.0;
  double stddev = 1.0;

  static NormalizationStats identity() noexcept { return {}; }
  /// Sample mean / stddev of `values`; ZeroVariance if the sample is constant.
  static NormalizationStats from_training(Eigen::Ref<const Eigen::VectorXd> values);

  [[nodiscard]] bool is_identity() const noexcept {
    return mean == 0.0 && stddev == 1.0;
  }
};

struct WindowStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// r_k = (P_{k+1} - P_k) / P_k * 100 for k = 0..T-2.
ReturnSeries compute_returns(const PriceSeries& prices);
ReturnSeries compute_returns(Eigen::Ref<const Eigen::VectorXd> prices);

/// Window mean and sample standard deviation (divisor W-1). A constant
/// window yields stddev 0; widths derived from it fall back downstream.
WindowStats window_stats(Eigen::Ref<const Eigen::VectorXd> window);

Eigen::VectorXd zscore(Eigen::Ref<const Eigen::VectorXd> values,
                       const NormalizationStats& stats);
Eigen::VectorXd denormalize(Eigen::Ref<const Eigen::VectorXd> normalized,
                            const NormalizationStats& stats);

inline double zscore(double value, const NormalizationStats& stats) {
  if (!(stats.stddev > 0.0)) fail(Errc::kZeroVariance, "zscore: stddev must be > 0");
  return (value - stats.mean) / stats.stddev;
}

inline double denormalize(double value, const NormalizationStats& stats) {
  return value * stats.stddev + stats.mean;
}

}  // namespace garchfis
