#include "garchfis/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "garchfis/forecaster.hpp"

namespace garchfis {

namespace {

void check_pair(Eigen::Ref<const Eigen::VectorXd> predicted,
                Eigen::Ref<const Eigen::VectorXd> actual) {
  if (predicted.size() != actual.size()) {
    fail(Errc::kLengthMismatch, "predicted and actual lengths differ");
  }
  if (predicted.size() == 0) fail(Errc::kEmptyInput, "empty metric input");
}

}  // namespace

double mae(Eigen::Ref<const Eigen::VectorXd> predicted,
           Eigen::Ref<const Eigen::VectorXd> actual) {
  check_pair(predicted, actual);
  return (predicted - actual).array().abs().mean();
}

double mape(Eigen::Ref<const Eigen::VectorXd> predicted,
            Eigen::Ref<const Eigen::VectorXd> actual) {
  check_pair(predicted, actual);
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    if (actual(i) == 0.0) {
      fail(Errc::kZeroActual,
           "actual value at index " + std::to_string(i) + " is zero");
    }
  }
  return 100.0 * ((predicted - actual).array() / actual.array()).abs().mean();
}

double r2(Eigen::Ref<const Eigen::VectorXd> predicted,
          Eigen::Ref<const Eigen::VectorXd> actual) {
  check_pair(predicted, actual);
  if (actual.size() < 2) fail(Errc::kLengthMismatch, "r2 needs at least 2 samples");
  const double mean = actual.mean();
  const double sst = (actual.array() - mean).square().sum();
  if (!(sst > 0.0)) fail(Errc::kConstantActual, "actual series is constant");
  const double sse = (predicted - actual).array().square().sum();
  return 1.0 - sse / sst;
}

MetricsReport compute_metrics(Eigen::Ref<const Eigen::VectorXd> predicted,
                              Eigen::Ref<const Eigen::VectorXd> actual) {
  MetricsReport report;
  report.mae = mae(predicted, actual);
  report.mape = mape(predicted, actual);
  report.r2 = r2(predicted, actual);
  report.n_samples = actual.size();
  return report;
}

ForecastPath baseline_forecast(BaselineKind kind,
                               Eigen::Ref<const Eigen::VectorXd> window, int n) {
  if (window.size() == 0) fail(Errc::kEmptyWindow, "baseline window is empty");
  if (n < 1) fail(Errc::kEmptyInput, "horizon must be >= 1");

  ForecastPath path;
  path.predictions.resize(n);
  path.step_volatility = Eigen::VectorXd::Zero(n);
  path.steps.resize(static_cast<std::size_t>(n));

  if (kind == BaselineKind::kPersistence) {
    path.predictions.setConstant(window(window.size() - 1));
    return path;
  }
  Eigen::VectorXd rolling = window;
  for (int i = 0; i < n; ++i) {
    const double prediction = rolling.mean();
    path.predictions(i) = prediction;
    for (Eigen::Index k = 0; k + 1 < rolling.size(); ++k) {
      rolling(k) = rolling(k + 1);
    }
    rolling(rolling.size() - 1) = prediction;
  }
  return path;
}

OriginForecaster make_baseline_forecaster(BaselineKind kind, int window_length) {
  return [kind, window_length](Eigen::Ref<const Eigen::VectorXd> history,
                               int horizon) {
    if (history.size() < window_length) {
      fail(Errc::kSeriesTooShort, "history shorter than one window");
    }
    return baseline_forecast(kind, history.tail(window_length), horizon);
  };
}

GridSearchResult grid_search_window(const PriceSeries& prices,
                                    const std::vector<int>& candidates,
                                    int horizon_h, int n,
                                    const ForecastConfig& base_config,
                                    const ForecasterFactory& factory) {
  if (candidates.empty()) fail(Errc::kEmptyInput, "no candidate window lengths");

  // chronological validation split: last 20% of the given prices
  constexpr double kValidationSplit = 0.8;

  ForecasterFactory build = factory;
  if (!build) {
    build = [&base_config, horizon_h](int window_length,
                                      const PriceSeries& training) {
      ForecastConfig config = base_config;
      config.window_length = window_length;
      NormalizationStats stats = NormalizationStats::identity();
      Eigen::VectorXd model_series = training.values();
      if (config.normalize) {
        stats = NormalizationStats::from_training(training.values());
        model_series = zscore(training.values(), stats);
      }
      const WmTraining trained = wm_train(model_series, window_length, horizon_h);
      return make_garchfis_forecaster(trained.rules, stats, config);
    };
  }

  GridSearchResult result;
  for (int window_length : candidates) {
    const auto train_size = static_cast<std::int64_t>(
        std::floor(kValidationSplit * static_cast<double>(prices.size())));
    if (train_size < window_length + horizon_h) {
      fail(Errc::kSeriesTooShort,
           "series too short for candidate window " + std::to_string(window_length));
    }
    const PriceSeries training(prices.values().head(train_size));
    const OriginForecaster forecaster = build(window_length, training);
    const BacktestResult backtest = rolling_backtest(
        prices, kValidationSplit, window_length, n, forecaster);
    result.table.push_back({window_length, backtest.metrics});
  }

  const auto best = std::min_element(
      result.table.begin(), result.table.end(),
      [](const GridSearchEntry& a, const GridSearchEntry& b) {
        if (a.report.mae != b.report.mae) return a.report.mae < b.report.mae;
        return a.window_length < b.window_length;
      });
  result.best_window = best->window_length;
  return result;
}

}  // namespace garchfis
