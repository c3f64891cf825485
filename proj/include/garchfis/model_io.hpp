#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "garchfis/fis.hpp"
#include "garchfis/garch.hpp"
#include "garchfis/series.hpp"

namespace garchfis {

/// Everything a forecast run needs from training. The GARCH fit is the one
/// estimated on the full training-partition returns; absent when the
/// partition is below the MLE sample guard.
struct TrainedModel {
  int window_length = 10;
  int train_horizon = 1;
  bool normalized = false;
  NormalizationStats stats;
  RuleBase rules;
  ParamSet theta_last;
  std::optional<GarchFit> garch_fit;
  double garch_initial_variance = 0.0;  // recursion seed of the stored fit
};

nlohmann::ordered_json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::ordered_json& json);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace garchfis
