#include "garchfis/model_io.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace garchfis {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json rules_to_json(const RuleBase& rules) {
  ordered_json out = ordered_json::array();
  for (const FuzzyRule& rule : rules.rules()) {
    out.push_back({{"antecedent", rule.antecedent},
                   {"consequent", rule.consequent},
                   {"weight_sum", rule.weight_sum}});
  }
  return out;
}

ordered_json theta_to_json(const ParamSet& theta) {
  ordered_json out = ordered_json::object();
  for (int j = 0; j < theta.length(); ++j) {
    const MembershipParams& entry = theta.at_offset(j);
    std::vector<double> centers(entry.centers.data(), entry.centers.data() + kNumFuzzySets);
    out[std::to_string(theta.start_index() + j)] = {
        {"centers", centers}, {"half_width", entry.half_width}};
  }
  return out;
}

ParamSet theta_from_json(const ordered_json& json) {
  if (!json.is_object() || json.empty()) {
    fail(Errc::kParseError, "model: theta_last must be a non-empty object");
  }
  std::vector<std::pair<std::int64_t, MembershipParams>> entries;
  for (const auto& [key, value] : json.items()) {
    MembershipParams params;
    const auto centers = value.at("centers").get<std::vector<double>>();
    if (centers.size() != kNumFuzzySets) {
      fail(Errc::kParseError, "model: membership entry needs 5 centers");
    }
    for (int j = 0; j < kNumFuzzySets; ++j) params.centers(j) = centers[static_cast<std::size_t>(j)];
    params.half_width = value.at("half_width").get<double>();
    entries.emplace_back(std::stoll(key), params);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MembershipParams> ordered;
  ordered.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].first != entries[i - 1].first + 1) {
      fail(Errc::kParseError, "model: theta_last indices must be consecutive");
    }
    ordered.push_back(entries[i].second);
  }
  return ParamSet(entries.front().first, std::move(ordered));
}

}  // namespace

nlohmann::ordered_json model_to_json(const TrainedModel& model) {
  ordered_json json;
  json["format"] = "garch-fis-model";
  json["version"] = 1;
  json["window_length"] = model.window_length;
  json["train_horizon"] = model.train_horizon;
  json["normalized"] = model.normalized;
  json["normalization"] = {{"mean", model.stats.mean},
                           {"stddev", model.stats.stddev}};
  json["rules"] = rules_to_json(model.rules);
  json["theta_last"] = theta_to_json(model.theta_last);
  if (model.garch_fit.has_value()) {
    const GarchFit& fit = *model.garch_fit;
    json["garch_fit"] = {{"mu", fit.params.mu},
                         {"omega", fit.params.omega},
                         {"alpha", fit.params.alpha},
                         {"beta", fit.params.beta},
                         {"loglik", fit.loglik},
                         {"sigma2_forecast", fit.sigma2_forecast},
                         {"initial_variance", model.garch_initial_variance}};
  } else {
    json["garch_fit"] = nullptr;
  }
  return json;
}

TrainedModel model_from_json(const nlohmann::ordered_json& json) {
  if (json.value("format", "") != "garch-fis-model") {
    fail(Errc::kParseError, "model: unknown format tag");
  }
  TrainedModel model;
  model.window_length = json.at("window_length").get<int>();
  model.train_horizon = json.at("train_horizon").get<int>();
  model.normalized = json.at("normalized").get<bool>();
  model.stats.mean = json.at("normalization").at("mean").get<double>();
  model.stats.stddev = json.at("normalization").at("stddev").get<double>();

  std::vector<FuzzyRule> rules;
  for (const auto& entry : json.at("rules")) {
    FuzzyRule rule;
    rule.antecedent = entry.at("antecedent").get<std::vector<int>>();
    rule.consequent = entry.at("consequent").get<double>();
    rule.weight_sum = entry.at("weight_sum").get<double>();
    rules.push_back(std::move(rule));
  }
  model.rules = RuleBase(model.window_length, std::move(rules));
  model.theta_last = theta_from_json(json.at("theta_last"));

  const auto& fit_json = json.at("garch_fit");
  if (!fit_json.is_null()) {
    GarchFit fit;
    fit.params.mu = fit_json.at("mu").get<double>();
    fit.params.omega = fit_json.at("omega").get<double>();
    fit.params.alpha = fit_json.at("alpha").get<double>();
    fit.params.beta = fit_json.at("beta").get<double>();
    fit.loglik = fit_json.at("loglik").get<double>();
    fit.sigma2_forecast = fit_json.at("sigma2_forecast").get<double>();
    model.garch_initial_variance = fit_json.at("initial_variance").get<double>();
    model.garch_fit = std::move(fit);
  }
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::kIo, "cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) fail(Errc::kIo, "failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::kIo, "cannot open model file " + path.string());
  ordered_json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kParseError, "model file " + path.string() + ": " + e.what());
  }
  return model_from_json(json);
}

}  // namespace garchfis
