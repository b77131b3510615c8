#include "neurodob/eval.hpp"

#include <cmath>
#include <cstdio>

#include "neurodob/errors.hpp"
#include "neurodob/settings.hpp"
#include "neurodob/text.hpp"

namespace ndob {

double rmse(std::span<const double> series, std::span<const double> reference) {
  if (series.size() != reference.size()) {
    throw LengthMismatch("rmse: series lengths differ");
  }
  if (series.empty()) throw EmptySeries("rmse: empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double d = series[i] - reference[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(series.size()));
}

double rmse_to_zero(std::span<const double> series) {
  const std::vector<double> zeros(series.size(), 0.0);
  return rmse(series, zeros);
}

double percent_change(double base, double next) {
  return (base - next) / base * 100.0;
}

std::vector<double> column_e_y(const SimLog& log) {
  std::vector<double> v;
  v.reserve(log.rows.size());
  for (const auto& r : log.rows) v.push_back(r.x.e_y);
  return v;
}

std::vector<double> column_e_psi(const SimLog& log) {
  std::vector<double> v;
  v.reserve(log.rows.size());
  for (const auto& r : log.rows) v.push_back(r.x.e_psi);
  return v;
}

RmseReport compare_logs(const SimLog& lqr_log, const SimLog& ndob_log) {
  RmseReport report;
  report.lqr.e_y = rmse_to_zero(column_e_y(lqr_log));
  report.lqr.e_psi = rmse_to_zero(column_e_psi(lqr_log));
  report.neurodob.e_y = rmse_to_zero(column_e_y(ndob_log));
  report.neurodob.e_psi = rmse_to_zero(column_e_psi(ndob_log));
  report.e_y_change_pct = percent_change(report.lqr.e_y, report.neurodob.e_y);
  report.e_psi_change_pct =
      percent_change(report.lqr.e_psi, report.neurodob.e_psi);
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_rmse_report(const RmseReport& r) {
  std::string out;
  out += "signal        lqr         neurodob    change\n";
  out += "e_y   [m]   " + fixed(r.lqr.e_y, 6) + "    " +
         fixed(r.neurodob.e_y, 6) + "    " + fixed(r.e_y_change_pct, 2) +
         "%\n";
  out += "e_psi [rad] " + fixed(r.lqr.e_psi, 6) + "    " +
         fixed(r.neurodob.e_psi, 6) + "    " + fixed(r.e_psi_change_pct, 2) +
         "%\n";
  return out;
}

std::string rmse_report_csv(const RmseReport& r) {
  std::string out = "signal,lqr,neurodob,change_pct\n";
  out += "e_y," + g17(r.lqr.e_y) + "," + g17(r.neurodob.e_y) + "," +
         g17(r.e_y_change_pct) + "\n";
  out += "e_psi," + g17(r.lqr.e_psi) + "," + g17(r.neurodob.e_psi) + "," +
         g17(r.e_psi_change_pct) + "\n";
  return out;
}

CaseSpec builtin_case(int id, const Config& cfg) {
  CaseSpec spec;
  spec.id = id;
  switch (id) {
    case 1:
      spec.train_map = "map1";
      spec.val_map = "map1";
      break;
    case 2:
      spec.train_map = "map1";
      spec.val_map = "map2";
      break;
    case 3:
      spec.train_map = "map3";
      spec.val_map = "map2";
      break;
    default:
      throw ConfigError("case id must be 1, 2 or 3");
  }
  const std::string section = "case." + std::to_string(id);
  spec.train_map = cfg.get_str(section, "train_map", spec.train_map);
  spec.val_map = cfg.get_str(section, "val_map", spec.val_map);
  spec.driver_profile =
      cfg.get_str(section, "driver_profile",
                  cfg.get_str("driver", "profile", "smooth"));
  spec.plant = plant_from_config(cfg, "sim");
  spec.plant.variant = PlantVariant::Perturbed;
  spec.train_cfg = train_config_from_config(cfg);
  spec.seed = static_cast<std::uint64_t>(cfg.get_int("sim", "seed", 0));
  spec.duration = cfg.get_double("sim", "duration", 100.0);
  spec.steer_limit = cfg.get_double("sim", "steer_limit", 0.6);
  spec.limits.epsilon1 = cfg.get_double("sim", "epsilon1", 0.1);
  spec.collect_runs = static_cast<int>(cfg.get_int("sim", "collect_runs", 24));
  spec.offset_run_duration = cfg.get_double("sim", "offset_run_duration", 20.0);
  spec.offset_e_y = cfg.get_double("sim", "offset_e_y", 0.3);
  spec.offset_e_psi = cfg.get_double("sim", "offset_e_psi", 0.05);
  if (spec.collect_runs < 1) throw ConfigError("collect_runs must be >= 1");
  return spec;
}

CaseAssets assemble_case_assets(const CaseSpec& spec, const Config& cfg,
                                const BuiltinMaps& maps) {
  CaseAssets assets;
  assets.vehicle = vehicle_from_config(cfg);
  assets.model = discretize(build_continuous(assets.vehicle),
                            assets.vehicle.ts);
  assets.lqr = solve_dare(assets.model, lqr_weights_from_config(cfg));
  auto find_map = [&maps](const std::string& name) -> const RoadMap* {
    if (name == "map1") return &maps.map1;
    if (name == "map2") return &maps.map2;
    if (name == "map3") return &maps.map3;
    throw ConfigError("unknown builtin map: " + name);
  };
  assets.train_map = find_map(spec.train_map);
  assets.val_map = find_map(spec.val_map);
  assets.driver = driver_from_config(cfg, spec.driver_profile);
  return assets;
}

namespace {

SimLog run_validation(const CaseSpec& spec, const CaseAssets& assets,
                      Stack stack, const Mlp* mlp,
                      const Standardizer* standardizer) {
  ScenarioConfig run;
  run.stack = stack;
  run.duration = spec.duration;
  run.plant = spec.plant;
  run.driver_profile = spec.driver_profile;
  run.seed = spec.seed;
  run.steer_limit = spec.steer_limit;
  run.limits = spec.limits;

  SimAssets sim_assets;
  sim_assets.map = assets.val_map;
  sim_assets.vehicle = assets.vehicle;
  sim_assets.model = assets.model;
  sim_assets.lqr = assets.lqr;
  sim_assets.mlp = mlp;
  sim_assets.standardizer = standardizer;
  sim_assets.driver = assets.driver;
  return run_scenario(run, sim_assets);
}

}  // namespace

CaseResult run_case(const CaseSpec& spec, const CaseAssets& assets) {
  ScenarioConfig collect;
  collect.stack = Stack::DriverOnly;
  collect.duration = spec.duration;
  collect.plant = spec.plant;
  collect.driver_profile = spec.driver_profile;
  collect.seed = spec.seed;
  collect.steer_limit = spec.steer_limit;
  collect.limits = spec.limits;

  SimAssets collect_assets;
  collect_assets.map = assets.train_map;
  collect_assets.vehicle = assets.vehicle;
  collect_assets.model = assets.model;
  collect_assets.lqr = assets.lqr;
  collect_assets.driver = assets.driver;

  CaseResult result;
  result.spec = spec;
  result.collect_log = collect_training_run(collect, collect_assets);
  if (result.collect_log.diverged) {
    throw DivergedState("training collection run diverged");
  }

  // merge samples from the centered run and the seeded offset runs
  std::vector<TrainingSample> samples;
  {
    DatasetBuildReport report{};
    auto first = build_dataset(training_rows(result.collect_log), &report);
    samples.insert(samples.end(), first.begin(), first.end());
    result.dataset_report = report;
  }
  Rng x0_rng = Rng::stream(spec.seed, "collect-x0");
  const double span =
      assets.train_map->total_length -
      spec.offset_run_duration * assets.vehicle.vx - 1.0;
  for (int run = 1; run < spec.collect_runs; ++run) {
    ScenarioConfig offset_cfg = collect;
    offset_cfg.duration = spec.offset_run_duration;
    offset_cfg.s0 = span > 0.0 ? x0_rng.uniform(0.0, span) : 0.0;
    offset_cfg.seed = spec.seed + static_cast<std::uint64_t>(run);
    offset_cfg.x0.e_y = x0_rng.uniform(-spec.offset_e_y, spec.offset_e_y);
    offset_cfg.x0.e_y_dot = x0_rng.uniform(-0.2, 0.2);
    offset_cfg.x0.e_psi =
        x0_rng.uniform(-spec.offset_e_psi, spec.offset_e_psi);
    offset_cfg.x0.e_psi_dot = x0_rng.uniform(-0.02, 0.02);
    const SimLog log = collect_training_run(offset_cfg, collect_assets);
    if (log.diverged) throw DivergedState("offset collection run diverged");
    DatasetBuildReport report{};
    const auto extra = build_dataset(training_rows(log), &report);
    samples.insert(samples.end(), extra.begin(), extra.end());
    result.dataset_report.total_rows += report.total_rows;
    result.dataset_report.dropped_outliers += report.dropped_outliers;
  }
  TrainConfig train_cfg = spec.train_cfg;
  train_cfg.seed = spec.seed;
  auto [model, standardizer, train_report] =
      train_neurodob(samples, train_cfg);
  result.model = std::move(model);
  result.standardizer = standardizer;
  result.train_report = std::move(train_report);

  result.lqr_log = run_validation(spec, assets, Stack::Lqr, nullptr, nullptr);
  result.ndob_log = run_validation(spec, assets, Stack::LqrNeurodob,
                                   &result.model, &result.standardizer);
  result.report = compare_logs(result.lqr_log, result.ndob_log);
  return result;
}

CaseResult run_case_with_model(const CaseSpec& spec, const CaseAssets& assets,
                               Mlp model, Standardizer standardizer) {
  CaseResult result;
  result.spec = spec;
  result.model = std::move(model);
  result.standardizer = standardizer;
  result.lqr_log = run_validation(spec, assets, Stack::Lqr, nullptr, nullptr);
  result.ndob_log = run_validation(spec, assets, Stack::LqrNeurodob,
                                   &result.model, &result.standardizer);
  result.report = compare_logs(result.lqr_log, result.ndob_log);
  return result;
}

std::string train_report_csv(const TrainReport& report) {
  std::string out = "epoch,train_loss,val_loss,lr\n";
  for (std::size_t i = 0; i < report.val_loss.size(); ++i) {
    out += std::to_string(i + 1) + "," + g17(report.train_loss[i]) + "," +
           g17(report.val_loss[i]) + "," + g17(report.lr_trace[i]) + "\n";
  }
  return out;
}

}  // namespace ndob
