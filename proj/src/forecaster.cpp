#include "garchfis/forecaster.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>

namespace garchfis {

namespace {

const double kSqrt10 = std::sqrt(10.0);

double window_return_variance(Eigen::Ref<const Eigen::VectorXd> window_raw) {
  for (Eigen::Index i = 0; i < window_raw.size(); ++i) {
    if (!(window_raw(i) > 0.0) || !std::isfinite(window_raw(i))) return 0.0;
  }
  const ReturnSeries returns = compute_returns(window_raw);
  if (returns.size() < 2) return 0.0;
  const WindowStats s = window_stats(returns.values());
  return s.stddev * s.stddev;
}

}  // namespace

double forecast_one_step(Eigen::Ref<const Eigen::VectorXd> window,
                         const ParamSet& theta, const RuleBase& rules) {
  return fis_infer(window, theta, rules);
}

ParamSet theta_for_origin(Eigen::Ref<const Eigen::VectorXd> series,
                          std::int64_t origin, int window_length) {
  const std::int64_t w = window_length;
  if (w < 3) fail(Errc::kWindowTooShort, "window length must be >= 3");
  if (origin < w - 1 || origin >= series.size()) {
    fail(Errc::kSeriesTooShort,
         "origin " + std::to_string(origin) + " has no full window");
  }
  const WindowStats first = window_stats(series.segment(0, w));
  const MembershipParams first_params =
      build_membership_params(first.mean, first.stddev > 0.0 ? first.stddev : 1.0);

  std::vector<MembershipParams> entries;
  entries.reserve(static_cast<std::size_t>(w));
  for (std::int64_t s = origin - w + 1; s <= origin; ++s) {
    if (s < w - 1) {
      entries.push_back({first_params.centers, 1.0});
      continue;
    }
    const WindowStats stats = window_stats(series.segment(s - w + 1, w));
    entries.push_back(build_membership_params(
        stats.mean, stats.stddev > 0.0 ? stats.stddev : 1.0));
  }
  return ParamSet(origin - w + 1, std::move(entries));
}

ForecastPath multi_step_forecast(Eigen::Ref<const Eigen::VectorXd> history,
                                 const RuleBase& rules, const ParamSet& theta,
                                 int n, const ForecastConfig& config,
                                 const NormalizationStats& stats) {
  config.validate();
  const int w = config.window_length;
  if (rules.empty()) fail(Errc::kEmptyRuleBase, "rule base is empty");
  if (rules.window_length() != w || theta.length() != w) {
    fail(Errc::kLengthMismatch,
         "rule base / parameter set window length mismatch");
  }
  if (history.size() < w) {
    fail(Errc::kSeriesTooShort, "history shorter than one window");
  }
  if (!history.allFinite()) {
    fail(Errc::kNonFiniteValue, "history has non-finite values");
  }
  if (n < 1) fail(Errc::kEmptyInput, "horizon must be >= 1");

  Eigen::VectorXd window_raw = history.tail(w);
  Eigen::VectorXd window_model = zscore(window_raw, stats);
  ParamSet params = theta;

  // Expanding policy: one fit on all returns up to the origin, variances
  // iterated forward from its one-step forecast.
  bool origin_fit_ok = false;
  GarchParams origin_params;
  double iterated_sigma2 = 0.0;
  if (config.garch_fallback == GarchFallbackPolicy::kExpanding) {
    try {
      const GarchFit fit = fit_garch(compute_returns(history), config.seed);
      origin_params = fit.params;
      iterated_sigma2 = fit.sigma2_forecast;
      origin_fit_ok = true;
    } catch (const Error&) {
      origin_fit_ok = false;
    }
  }

  ForecastPath path;
  path.predictions.resize(n);
  path.step_volatility.resize(n);
  path.steps.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    StepDiagnostics& diag = path.steps[static_cast<std::size_t>(i)];

    const double prediction_model =
        fis_infer(window_model, params, rules, &diag.fis_fallback_fired);
    const double prediction_raw = denormalize(prediction_model, stats);

    double sigma2 = 0.0;
    switch (config.garch_fallback) {
      case GarchFallbackPolicy::kExpanding:
        if (origin_fit_ok) {
          sigma2 = iterated_sigma2;
          iterated_sigma2 = iterate_variance(origin_params, iterated_sigma2);
          diag.garch_mle_ok = true;
        } else {
          sigma2 = window_return_variance(window_raw);
          diag.garch_fallback_fired = true;
        }
        break;
      case GarchFallbackPolicy::kWindowStd:
        sigma2 = window_return_variance(window_raw);
        break;
      case GarchFallbackPolicy::kStrict:
        try {
          const GarchFit fit = fit_garch(compute_returns(window_raw), config.seed);
          sigma2 = fit.sigma2_forecast;
          diag.garch_mle_ok = true;
        } catch (const Error&) {
          sigma2 = window_return_variance(window_raw);
          diag.garch_fallback_fired = true;
        }
        break;
    }

    // shift, then derive the new entry from the shifted window's mean
    for (int k = 0; k + 1 < w; ++k) {
      window_raw(k) = window_raw(k + 1);
      window_model(k) = window_model(k + 1);
    }
    window_raw(w - 1) = prediction_raw;
    window_model(w - 1) = prediction_model;

    const double mean_raw = window_raw.mean();
    const double mean_model = window_model.mean();
    const double sigma_percent = std::sqrt(sigma2);
    double half_width_raw = mean_raw * sigma_percent / 100.0;
    if (config.vol_scaling == VolScaling::kAlg3) half_width_raw *= kSqrt10;
    const double half_width_model = half_width_raw / stats.stddev;
    params.roll(build_membership_params(mean_model, half_width_model));

    diag.sigma_percent = sigma_percent;
    diag.window_mean = mean_raw;
    diag.theta_half_width = params.at_offset(w - 1).half_width;

    path.predictions(i) = prediction_raw;
    path.step_volatility(i) = half_width_raw;
  }
  return path;
}

OriginForecaster make_garchfis_forecaster(const RuleBase& rules,
                                          const NormalizationStats& stats,
                                          const ForecastConfig& config) {
  config.validate();
  return [rules, stats, config](Eigen::Ref<const Eigen::VectorXd> history,
                                int horizon) {
    const Eigen::VectorXd model_series = zscore(history, stats);
    const ParamSet theta = theta_for_origin(model_series, history.size() - 1,
                                            config.window_length);
    return multi_step_forecast(history, rules, theta, horizon, config, stats);
  };
}

BacktestResult rolling_backtest(const PriceSeries& prices, double split,
                                int window_length, int n,
                                const OriginForecaster& forecaster) {
  if (!(split > 0.0 && split < 1.0)) {
    fail(Errc::kUsage, "split fraction must lie in (0, 1)");
  }
  if (n < 1) fail(Errc::kEmptyInput, "horizon must be >= 1");
  const std::int64_t total = prices.size();
  const auto train_size =
      static_cast<std::int64_t>(std::floor(split * static_cast<double>(total)));
  const std::int64_t test_size = total - train_size;
  if (test_size < window_length + n) {
    fail(Errc::kTestPartitionTooShort,
         "test partition needs at least window_length + horizon observations");
  }
  const std::int64_t first_origin = train_size - 1;
  const std::int64_t last_origin = total - 1 - n;
  if (first_origin < window_length - 1) {
    fail(Errc::kSeriesTooShort, "training partition shorter than one window");
  }

  const auto origin_count = static_cast<std::size_t>(last_origin - first_origin + 1);
  BacktestResult result;
  result.origins.resize(origin_count);

  // independent origins, fixed result slots
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t num_threads = std::min<std::size_t>(hw, origin_count);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(num_threads);
  for (std::size_t t = 0; t < num_threads; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (std::size_t k = t; k < origin_count; k += num_threads) {
          const std::int64_t origin = first_origin + static_cast<std::int64_t>(k);
          result.origins[k].origin = origin;
          result.origins[k].path =
              forecaster(prices.values().head(origin + 1), n);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  result.mae_by_step = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd predicted(static_cast<Eigen::Index>(origin_count) * n);
  Eigen::VectorXd actual(static_cast<Eigen::Index>(origin_count) * n);
  Eigen::Index flat = 0;
  for (const BacktestOriginResult& entry : result.origins) {
    for (int i = 0; i < n; ++i) {
      const double truth = prices[entry.origin + i + 1];
      const double pred = entry.path.predictions(i);
      result.mae_by_step(i) += std::abs(pred - truth);
      predicted(flat) = pred;
      actual(flat) = truth;
      ++flat;
    }
  }
  result.mae_by_step /= static_cast<double>(origin_count);
  result.metrics = compute_metrics(predicted, actual);
  return result;
}

}  // namespace garchfis
