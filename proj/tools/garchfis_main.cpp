#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "garchfis/csv.hpp"
#include "garchfis/errors.hpp"
#include "garchfis/evaluation.hpp"
#include "garchfis/forecaster.hpp"
#include "garchfis/model_io.hpp"

namespace {

namespace fs = std::filesystem;
using garchfis::Errc;
using garchfis::Error;
using ordered_json = nlohmann::ordered_json;

struct CliOptions {
  std::string data_path;
  std::string date_column = "date";
  std::string close_column = "close";
  std::string delimiter = ",";
  bool decimal_comma = false;
  int window = 10;
  int horizon = 20;
  double split = 0.8;
  bool normalize = false;
  std::string garch_fallback = "expanding";
  std::string vol_scaling = "eq6";
  std::string model_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string candidates = "3,5,10,15";
};

garchfis::GarchFallbackPolicy parse_fallback(const std::string& name) {
  if (name == "expanding") return garchfis::GarchFallbackPolicy::kExpanding;
  if (name == "window-std") return garchfis::GarchFallbackPolicy::kWindowStd;
  if (name == "strict") return garchfis::GarchFallbackPolicy::kStrict;
  garchfis::fail(Errc::kUsage, "unknown GARCH fallback policy: " + name);
}

garchfis::VolScaling parse_scaling(const std::string& name) {
  if (name == "eq6") return garchfis::VolScaling::kEq6;
  if (name == "alg3") return garchfis::VolScaling::kAlg3;
  garchfis::fail(Errc::kUsage, "unknown volatility scaling: " + name);
}

garchfis::ForecastConfig forecast_config(const CliOptions& options) {
  garchfis::ForecastConfig config;
  config.window_length = options.window;
  config.horizon = options.horizon;
  config.garch_fallback = parse_fallback(options.garch_fallback);
  config.vol_scaling = parse_scaling(options.vol_scaling);
  config.normalize = options.normalize;
  config.seed = options.seed;
  config.validate();
  return config;
}

garchfis::DatasetSpec dataset_spec(const CliOptions& options) {
  if (options.data_path.empty()) {
    garchfis::fail(Errc::kUsage, "--data is required");
  }
  if (options.delimiter.size() != 1) {
    garchfis::fail(Errc::kUsage, "--delimiter must be a single character");
  }
  return {options.data_path, options.date_column, options.close_column,
          options.delimiter[0], options.decimal_comma};
}

/// Resolved configuration, defaults included; identical content prefixes
/// every report this run writes.
ordered_json resolved_config(const std::string& command, const CliOptions& o) {
  ordered_json json;
  json["command"] = command;
  json["data"] = o.data_path;
  json["date_col"] = o.date_column;
  json["close_col"] = o.close_column;
  json["delimiter"] = o.delimiter;
  json["decimal_comma"] = o.decimal_comma;
  json["window"] = o.window;
  json["horizon"] = o.horizon;
  json["split"] = o.split;
  json["normalize"] = o.normalize;
  json["garch_fallback"] = o.garch_fallback;
  json["vol_scaling"] = o.vol_scaling;
  json["model"] = o.model_path;
  json["out_dir"] = o.out_dir;
  json["seed"] = o.seed;
  if (command == "gridsearch") json["candidates"] = o.candidates;
  return json;
}

void write_config_preamble(std::ofstream& out, const ordered_json& config) {
  for (const auto& [key, value] : config.items()) {
    out << "# " << key << "="
        << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

std::ofstream open_report(const fs::path& path) {
  std::ofstream out(path);
  if (!out) garchfis::fail(Errc::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

std::int64_t train_partition_size(const garchfis::PriceSeries& prices, double split) {
  if (!(split > 0.0 && split < 1.0)) {
    garchfis::fail(Errc::kUsage, "--split must lie in (0, 1)");
  }
  return static_cast<std::int64_t>(
      std::floor(split * static_cast<double>(prices.size())));
}

garchfis::TrainedModel train_model(const CliOptions& options,
                                   const garchfis::Dataset& dataset) {
  const auto train_size = train_partition_size(dataset.prices, options.split);
  if (train_size < options.window + 1) {
    garchfis::fail(Errc::kSeriesTooShort,
                   "training partition shorter than window + 1");
  }
  const Eigen::VectorXd train = dataset.prices.values().head(train_size);

  garchfis::TrainedModel model;
  model.window_length = options.window;
  model.train_horizon = 1;
  model.normalized = options.normalize;
  model.stats = options.normalize
                    ? garchfis::NormalizationStats::from_training(train)
                    : garchfis::NormalizationStats::identity();

  const Eigen::VectorXd model_series = garchfis::zscore(train, model.stats);
  garchfis::WmTraining trained =
      garchfis::wm_train(model_series, options.window, model.train_horizon);
  model.rules = std::move(trained.rules);
  model.theta_last = std::move(trained.theta_last);

  try {
    const garchfis::ReturnSeries returns =
        garchfis::compute_returns(garchfis::PriceSeries(train));
    garchfis::GarchFit fit = garchfis::fit_garch(returns, options.seed);
    model.garch_initial_variance = fit.cond_variance(0);
    model.garch_fit = std::move(fit);
  } catch (const Error&) {
    model.garch_fit.reset();  // below the sample guard or degenerate returns
  }
  return model;
}

void check_model_compatibility(const garchfis::TrainedModel& model,
                               const CliOptions& options, CLI::App* cmd) {
  if (cmd->count("--window") > 0 && options.window != model.window_length) {
    garchfis::fail(Errc::kUsage,
                   "--window disagrees with the model's window length (" +
                       std::to_string(model.window_length) + ")");
  }
  if (cmd->count("--normalize") > 0 && options.normalize != model.normalized) {
    garchfis::fail(Errc::kUsage, "--normalize disagrees with the model file");
  }
}

int run_train(const CliOptions& options) {
  const ordered_json config = resolved_config("train", options);
  std::cout << "resolved config: " << config.dump() << '\n';
  const garchfis::Dataset dataset = garchfis::ingest(dataset_spec(options));
  const garchfis::TrainedModel model = train_model(options, dataset);

  fs::path model_path = options.model_path.empty()
                            ? fs::path(options.out_dir) / "model.json"
                            : fs::path(options.model_path);
  fs::create_directories(model_path.parent_path().empty()
                             ? fs::path(".")
                             : model_path.parent_path());
  garchfis::save_model(model, model_path);

  ordered_json summary;
  summary["config"] = config;
  summary["rows"] = dataset.rows_read;
  summary["rows_dropped"] = dataset.rows_dropped;
  summary["rules"] = model.rules.size();
  summary["garch_fit"] = model.garch_fit.has_value();
  summary["model_file"] = model_path.string();
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_forecast(const CliOptions& options, CLI::App* cmd) {
  if (options.model_path.empty()) {
    garchfis::fail(Errc::kUsage, "--model is required for forecast");
  }
  const garchfis::TrainedModel model = garchfis::load_model(options.model_path);
  CliOptions effective = options;
  effective.window = cmd->count("--window") > 0 ? options.window : model.window_length;
  effective.normalize =
      cmd->count("--normalize") > 0 ? options.normalize : model.normalized;
  check_model_compatibility(model, effective, cmd);
  const ordered_json config = resolved_config("forecast", effective);
  std::cout << "resolved config: " << config.dump() << '\n';

  const garchfis::Dataset dataset = garchfis::ingest(dataset_spec(effective));
  garchfis::ForecastConfig fc = forecast_config(effective);
  const garchfis::OriginForecaster forecaster =
      garchfis::make_garchfis_forecaster(model.rules, model.stats, fc);
  const garchfis::ForecastPath path =
      forecaster(dataset.prices.values(), fc.horizon);

  fs::create_directories(options.out_dir);
  std::ofstream out = open_report(fs::path(options.out_dir) / "forecast.csv");
  write_config_preamble(out, config);
  out << "step,predicted,sigma_hat,garch_mle,garch_fallback,fis_fallback\n";
  for (int i = 0; i < fc.horizon; ++i) {
    const garchfis::StepDiagnostics& diag = path.steps[static_cast<std::size_t>(i)];
    out << (i + 1) << ',' << garchfis::format_double(path.predictions(i)) << ','
        << garchfis::format_double(path.step_volatility(i)) << ','
        << (diag.garch_mle_ok ? 1 : 0) << ',' << (diag.garch_fallback_fired ? 1 : 0)
        << ',' << (diag.fis_fallback_fired ? 1 : 0) << '\n';
  }

  ordered_json summary;
  summary["config"] = config;
  summary["steps"] = fc.horizon;
  summary["report"] = (fs::path(options.out_dir) / "forecast.csv").string();
  std::cout << summary.dump(2) << '\n';
  return 0;
}

ordered_json metrics_json(const garchfis::MetricsReport& report) {
  return {{"mae", report.mae},
          {"mape", report.mape},
          {"r2", report.r2},
          {"n_samples", report.n_samples}};
}

int run_backtest(const CliOptions& options, CLI::App* cmd) {
  if (options.model_path.empty()) {
    garchfis::fail(Errc::kUsage, "--model is required for backtest");
  }
  const garchfis::TrainedModel model = garchfis::load_model(options.model_path);
  CliOptions effective = options;
  effective.window = cmd->count("--window") > 0 ? options.window : model.window_length;
  effective.normalize =
      cmd->count("--normalize") > 0 ? options.normalize : model.normalized;
  check_model_compatibility(model, effective, cmd);
  const ordered_json config = resolved_config("backtest", effective);
  std::cout << "resolved config: " << config.dump() << '\n';

  const garchfis::Dataset dataset = garchfis::ingest(dataset_spec(effective));
  const garchfis::ForecastConfig fc = forecast_config(effective);
  const int n = fc.horizon;
  const int w = fc.window_length;

  const auto garch_fis =
      garchfis::make_garchfis_forecaster(model.rules, model.stats, fc);
  const auto persistence = garchfis::make_baseline_forecaster(
      garchfis::BaselineKind::kPersistence, w);
  const auto moving_average = garchfis::make_baseline_forecaster(
      garchfis::BaselineKind::kMovingAverage, w);

  const auto bt_model =
      garchfis::rolling_backtest(dataset.prices, effective.split, w, n, garch_fis);
  const auto bt_persistence =
      garchfis::rolling_backtest(dataset.prices, effective.split, w, n, persistence);
  const auto bt_moving =
      garchfis::rolling_backtest(dataset.prices, effective.split, w, n, moving_average);

  fs::create_directories(options.out_dir);

  {
    std::ofstream out = open_report(fs::path(options.out_dir) / "metrics.json");
    ordered_json json;
    json["config"] = config;
    json["data"] = {{"rows", dataset.rows_read},
                    {"rows_dropped", dataset.rows_dropped},
                    {"train_rows", train_partition_size(dataset.prices, effective.split)},
                    {"origins", bt_model.origins.size()}};
    json["models"] = {{"garch_fis", metrics_json(bt_model.metrics)},
                      {"persistence", metrics_json(bt_persistence.metrics)},
                      {"moving_average", metrics_json(bt_moving.metrics)}};
    out << json.dump(2) << '\n';
  }
  {
    std::ofstream out = open_report(fs::path(options.out_dir) / "mae_by_step.csv");
    write_config_preamble(out, config);
    out << "step,garch_fis,persistence,moving_average\n";
    for (int i = 0; i < n; ++i) {
      out << (i + 1) << ',' << garchfis::format_double(bt_model.mae_by_step(i))
          << ',' << garchfis::format_double(bt_persistence.mae_by_step(i)) << ','
          << garchfis::format_double(bt_moving.mae_by_step(i)) << '\n';
    }
  }
  {
    std::ofstream out = open_report(fs::path(options.out_dir) / "forecasts.csv");
    write_config_preamble(out, config);
    out << "origin,step,date,predicted,actual,sigma_hat\n";
    for (const auto& entry : bt_model.origins) {
      for (int i = 0; i < n; ++i) {
        const auto target = static_cast<std::size_t>(entry.origin) +
                            static_cast<std::size_t>(i) + 1;
        out << entry.origin << ',' << (i + 1) << ',' << dataset.dates[target]
            << ',' << garchfis::format_double(entry.path.predictions(i)) << ','
            << garchfis::format_double(dataset.prices[static_cast<Eigen::Index>(target)])
            << ',' << garchfis::format_double(entry.path.step_volatility(i)) << '\n';
      }
    }
  }

  ordered_json summary;
  summary["config"] = config;
  summary["origins"] = bt_model.origins.size();
  summary["garch_fis_mae"] = bt_model.metrics.mae;
  summary["persistence_mae"] = bt_persistence.metrics.mae;
  summary["moving_average_mae"] = bt_moving.metrics.mae;
  summary["out_dir"] = options.out_dir;
  std::cout << summary.dump(2) << '\n';
  return 0;
}

std::vector<int> parse_candidates(const std::string& text) {
  std::vector<int> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) {
        try {
          out.push_back(std::stoi(token));
        } catch (const std::exception&) {
          garchfis::fail(Errc::kUsage, "bad window candidate: " + token);
        }
        token.clear();
      }
    } else {
      token += c;
    }
  }
  if (out.empty()) garchfis::fail(Errc::kUsage, "empty candidate list");
  return out;
}

int run_gridsearch(const CliOptions& options) {
  const ordered_json config = resolved_config("gridsearch", options);
  std::cout << "resolved config: " << config.dump() << '\n';
  const garchfis::Dataset dataset = garchfis::ingest(dataset_spec(options));
  const auto train_size = train_partition_size(dataset.prices, options.split);
  if (train_size < 2) garchfis::fail(Errc::kSeriesTooShort, "training partition empty");
  const garchfis::PriceSeries training(dataset.prices.values().head(train_size));

  const garchfis::ForecastConfig fc = forecast_config(options);
  const garchfis::GridSearchResult result = garchfis::grid_search_window(
      training, parse_candidates(options.candidates), 1, fc.horizon, fc);

  fs::create_directories(options.out_dir);
  std::ofstream out = open_report(fs::path(options.out_dir) / "gridsearch.json");
  ordered_json json;
  json["config"] = config;
  json["best_window"] = result.best_window;
  json["table"] = ordered_json::array();
  for (const auto& entry : result.table) {
    ordered_json row = metrics_json(entry.report);
    row["window"] = entry.window_length;
    json["table"].push_back(row);
  }
  out << json.dump(2) << '\n';
  std::cout << json.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GARCH-driven fuzzy inference forecaster"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags win");

  CliOptions options;
  app.add_option("--data", options.data_path, "input CSV file");
  app.add_option("--date-col", options.date_column, "date column name")
      ->capture_default_str();
  app.add_option("--close-col", options.close_column, "close column name")
      ->capture_default_str();
  app.add_option("--delimiter", options.delimiter, "CSV delimiter")
      ->capture_default_str();
  app.add_flag("--decimal-comma", options.decimal_comma,
               "closes use decimal commas");
  app.add_option("--window", options.window, "rolling window length W")
      ->capture_default_str();
  app.add_option("--horizon", options.horizon, "forecast horizon n")
      ->capture_default_str();
  app.add_option("--split", options.split, "training fraction")
      ->capture_default_str();
  app.add_flag("--normalize", options.normalize, "z-score prices before training");
  app.add_option("--garch-fallback", options.garch_fallback,
                 "GARCH policy for short windows")
      ->check(CLI::IsMember({"expanding", "window-std", "strict"}))
      ->capture_default_str();
  app.add_option("--vol-scaling", options.vol_scaling,
                 "volatility-to-width scaling variant")
      ->check(CLI::IsMember({"eq6", "alg3"}))
      ->capture_default_str();
  app.add_option("--model", options.model_path, "model file path");
  app.add_option("--out-dir", options.out_dir, "report directory")
      ->capture_default_str();
  app.add_option("--seed", options.seed, "seed for optimizer restarts")
      ->capture_default_str();
  app.add_option("--candidates", options.candidates,
                 "window candidates for gridsearch")
      ->capture_default_str();

  CLI::App* train = app.add_subcommand("train", "fit the rule base and save a model");
  CLI::App* forecast = app.add_subcommand("forecast", "n-step forecast from the data's end");
  CLI::App* backtest = app.add_subcommand("backtest", "rolling multi-step backtest");
  CLI::App* gridsearch = app.add_subcommand("gridsearch", "window-length grid search");
  for (CLI::App* sub : {train, forecast, backtest, gridsearch}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "train") return run_train(options);
    if (command == "forecast") return run_forecast(options, &app);
    if (command == "backtest") return run_backtest(options, &app);
    return run_gridsearch(options);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == Errc::kUsage) return 2;
    return garchfis::is_numeric_error(e.code()) ? 4 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
