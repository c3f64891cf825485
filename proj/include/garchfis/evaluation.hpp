#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "garchfis/forecast_types.hpp"
#include "garchfis/series.hpp"

namespace garchfis {

struct MetricsReport {
  double mae = 0.0;   // price units
  double mape = 0.0;  // percent
  double r2 = 0.0;
  std::int64_t n_samples = 0;
};

double mae(Eigen::Ref<const Eigen::VectorXd> predicted,
           Eigen::Ref<const Eigen::VectorXd> actual);

/// 100/N * sum |(pred - actual) / actual|; every actual must be nonzero.
double mape(Eigen::Ref<const Eigen::VectorXd> predicted,
            Eigen::Ref<const Eigen::VectorXd> actual);

/// 1 - SSE/SST; negative when the forecast is worse than the actual mean.
double r2(Eigen::Ref<const Eigen::VectorXd> predicted,
          Eigen::Ref<const Eigen::VectorXd> actual);

MetricsReport compute_metrics(Eigen::Ref<const Eigen::VectorXd> predicted,
                              Eigen::Ref<const Eigen::VectorXd> actual);

enum class BaselineKind { kPersistence, kMovingAverage };

/// Persistence repeats the last window value; moving-average repeats the
/// window mean while recursively appending its own output.
ForecastPath baseline_forecast(BaselineKind kind,
                               Eigen::Ref<const Eigen::VectorXd> window, int n);

OriginForecaster make_baseline_forecaster(BaselineKind kind, int window_length);

struct GridSearchEntry {
  int window_length = 0;
  MetricsReport report;
};

struct GridSearchResult {
  int best_window = 0;  // argmin by MAE, ties to the smaller window
  std::vector<GridSearchEntry> table;
};

/// Builds the per-candidate forecasting strategy from the sub-training
/// prices the grid search carves out. The default factory trains the
/// GARCH-FIS model.
using ForecasterFactory = std::function<OriginForecaster(
    int window_length, const PriceSeries& training_prices)>;

/// Evaluates every candidate window length on a chronological validation
/// split (last 20% of `prices`), training on the first 80%.
GridSearchResult grid_search_window(const PriceSeries& prices,
                                    const std::vector<int>& candidates,
                                    int horizon_h, int n,
                                    const ForecastConfig& base_config,
                                    const ForecasterFactory& factory = {});

}  // namespace garchfis
