#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "garchfis/evaluation.hpp"
#include "garchfis/fis.hpp"
#include "garchfis/forecast_types.hpp"
#include "garchfis/garch.hpp"
#include "garchfis/series.hpp"

namespace garchfis {

/// One fuzzy-inference step on the current window; pure.
double forecast_one_step(Eigen::Ref<const Eigen::VectorXd> window,
                         const ParamSet& theta, const RuleBase& rules);

/// Membership parameters for the window ending at `origin`, built from the
/// series itself exactly as training builds them: index s takes the stats of
/// the window ending at s; indices earlier than the first full window take
/// the first window's centers with half-width 1.0. Reads nothing beyond
/// `origin`.
ParamSet theta_for_origin(Eigen::Ref<const Eigen::VectorXd> series,
                          std::int64_t origin, int window_length);

/// Recursive n-step forecast. Per step i:
///   1. predict with the current window and parameter set;
///   2. obtain the step variance from the configured GARCH route
///      (pre-shift window);
///   3. shift the window, appending the prediction at full weight;
///   4. convert volatility to a price half-width from the shifted window's
///      mean;
///   5. roll the parameter set with the new entry.
/// `history` holds true prices up to and including the origin (raw units);
/// `theta` must cover the last window_length indices in model space. With
/// normalization enabled, fuzzification runs in z-space while GARCH always
/// sees raw-price returns; widths convert between the two via the stats.
ForecastPath multi_step_forecast(Eigen::Ref<const Eigen::VectorXd> history,
                                 const RuleBase& rules, const ParamSet& theta,
                                 int n, const ForecastConfig& config,
                                 const NormalizationStats& stats = {});

/// The product forecaster as an origin-level strategy: builds the parameter
/// set from the history and runs the recursion.
OriginForecaster make_garchfis_forecaster(const RuleBase& rules,
                                          const NormalizationStats& stats,
                                          const ForecastConfig& config);

struct BacktestOriginResult {
  std::int64_t origin = 0;
  ForecastPath path;
};

struct BacktestResult {
  std::vector<BacktestOriginResult> origins;
  Eigen::VectorXd mae_by_step;  // |error| averaged across origins, per step
  MetricsReport metrics;        // pooled over every (origin, step) pair
};

/// Runs `forecaster` from every test-partition origin (first origin is the
/// last training index) and aggregates errors against realized prices.
/// Origins are independent and evaluated concurrently.
BacktestResult rolling_backtest(const PriceSeries& prices, double split,
                                int window_length, int n,
                                const OriginForecaster& forecaster);

}  // namespace garchfis
