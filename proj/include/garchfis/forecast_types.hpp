#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "garchfis/errors.hpp"

namespace garchfis {

/// Source of the per-step conditional variance during recursive forecasting.
///   kExpanding  — one MLE on all returns up to the origin, then the variance
///                 recursion iterated forward (default);
///   kWindowStd  — sample standard deviation of the current window's returns;
///   kStrict     — MLE on the current (forecast-augmented) window, falling
///                 back to kWindowStd when the window is too short or the
///                 fit fails.
enum class GarchFallbackPolicy { kExpanding, kWindowStd, kStrict };

/// Conversion from conditional volatility (percent) to membership half-width:
/// kEq6 uses window_mean * sigma / 100; kAlg3 scales that by sqrt(10).
enum class VolScaling { kEq6, kAlg3 };

struct ForecastConfig {
  int window_length = 10;
  int horizon = 20;
  GarchFallbackPolicy garch_fallback = GarchFallbackPolicy::kExpanding;
  VolScaling vol_scaling = VolScaling::kEq6;
  bool normalize = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (window_length < 3) fail(Errc::kWindowTooShort, "window length must be >= 3");
    if (horizon < 1) fail(Errc::kEmptyInput, "forecast horizon must be >= 1");
  }
};

struct StepDiagnostics {
  bool garch_mle_ok = false;        // an MLE-derived variance drove this step
  bool garch_fallback_fired = false;  // configured route failed, window-std used
  bool fis_fallback_fired = false;  // no rule fired; persistence output
  double sigma_percent = 0.0;       // conditional volatility, percent units
  double window_mean = 0.0;         // post-shift window mean, price units
  double theta_half_width = 0.0;    // half-width stored in the parameter set
};

/// Recursive n-step forecast: predictions and per-step price volatility in
/// raw price units, plus per-step diagnostics.
struct ForecastPath {
  Eigen::VectorXd predictions;
  Eigen::VectorXd step_volatility;
  std::vector<StepDiagnostics> steps;
};

/// A forecasting strategy for one backtest origin: receives the true prices
/// up to and including the origin and the horizon, returns the path.
using OriginForecaster = std::function<ForecastPath(
    Eigen::Ref<const Eigen::VectorXd> history, int horizon)>;

}  // namespace garchfis
