#include "garchfis/series.hpp"

#include <cmath>
#include <string>

namespace garchfis {

PriceSeries::PriceSeries(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) fail(Errc::kEmptyInput, "price series is empty");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double p = values_(i);
    if (!std::isfinite(p)) {
      fail(Errc::kNonFiniteValue,
           "price series has non-finite value at index " + std::to_string(i));
    }
    if (p <= 0.0) {
      fail(Errc::kNonPositivePrice,
           "price series has non-positive value at index " + std::to_string(i));
    }
  }
}

Eigen::Ref<const Eigen::VectorXd> PriceSeries::window_ending_at(
    Eigen::Index end, Eigen::Index length) const {
  if (length < 1 || end < length - 1 || end >= values_.size()) {
    fail(Errc::kWindowTooShort, "window [" + std::to_string(end - length + 1) +
                                    ", " + std::to_string(end) +
                                    "] out of range");
  }
  return values_.segment(end - length + 1, length);
}

ReturnSeries::ReturnSeries(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) fail(Errc::kEmptyInput, "return series is empty");
  if (!values_.allFinite()) {
    fail(Errc::kNonFiniteValue, "return series has non-finite values");
  }
}

ReturnSeries compute_returns(Eigen::Ref<const Eigen::VectorXd> prices) {
  const Eigen::Index n = prices.size();
  if (n < 2) {
    fail(Errc::kEmptyOrSingleton, "need at least 2 prices to compute returns");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(prices(i) > 0.0)) {
      fail(Errc::kNonPositivePrice,
           "non-positive price at index " + std::to_string(i));
    }
  }
  const auto head = prices.head(n - 1).array();
  const auto tail = prices.tail(n - 1).array();
  return ReturnSeries(((tail - head) / head * 100.0).matrix());
}

ReturnSeries compute_returns(const PriceSeries& prices) {
  return compute_returns(prices.values());
}

WindowStats window_stats(Eigen::Ref<const Eigen::VectorXd> window) {
  const Eigen::Index w = window.size();
  if (w < 2) fail(Errc::kWindowTooShort, "window needs at least 2 observations");
  const double mean = window.mean();
  const double ss = (window.array() - mean).square().sum();
  return {mean, std::sqrt(ss / static_cast<double>(w - 1))};
}

NormalizationStats NormalizationStats::from_training(
    Eigen::Ref<const Eigen::VectorXd> values) {
  const WindowStats s = window_stats(values);
  if (!(s.stddev > 0.0)) {
    fail(Errc::kZeroVariance, "training partition is constant; cannot z-score");
  }
  return {s.mean, s.stddev};
}

Eigen::VectorXd zscore(Eigen::Ref<const Eigen::VectorXd> values,
                       const NormalizationStats& stats) {
  if (!(stats.stddev > 0.0)) fail(Errc::kZeroVariance, "zscore: stddev must be > 0");
  return ((values.array() - stats.mean) / stats.stddev).matrix();
}

Eigen::VectorXd denormalize(Eigen::Ref<const Eigen::VectorXd> normalized,
                            const NormalizationStats& stats) {
  return (normalized.array() * stats.stddev + stats.mean).matrix();
}

}  // namespace garchfis
