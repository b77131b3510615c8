#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neurodob/config.hpp"
#include "neurodob/nn.hpp"
#include "neurodob/road.hpp"
#include "neurodob/sim.hpp"

namespace ndob {

/// sqrt(mean((series - reference)^2)); throws LengthMismatch / EmptySeries.
double rmse(std::span<const double> series, std::span<const double> reference);

/// RMSE of a signal against zero reference.
double rmse_to_zero(std::span<const double> series);

/// (base - next) / base * 100; positive = improvement.
double percent_change(double base, double next);

std::vector<double> column_e_y(const SimLog& log);
std::vector<double> column_e_psi(const SimLog& log);

struct StackRmse {
  double e_y = 0.0;
  double e_psi = 0.0;
};

struct RmseReport {
  StackRmse lqr;
  StackRmse neurodob;
  double e_y_change_pct = 0.0;
  double e_psi_change_pct = 0.0;
};

RmseReport compare_logs(const SimLog& lqr_log, const SimLog& ndob_log);

/// Aligned text table, mirrored by a CSV twin.
std::string format_rmse_report(const RmseReport& report);
std::string rmse_report_csv(const RmseReport& report);

struct CaseSpec {
  int id = 1;
  std::string train_map = "map1";
  std::string val_map = "map1";
  std::string driver_profile = "smooth";
  PlantConfig plant;
  TrainConfig train_cfg;
  std::uint64_t seed = 0;
  double duration = 100.0;
  double steer_limit = 0.6;
  CompensationLimits limits{};
  // data collection: one full-length centered run plus short runs launched
  // from seeded state offsets at seeded stations, so driver recovery
  // transients cover state neighborhoods at every curvature level
  int collect_runs = 24;
  double offset_run_duration = 20.0;  // s
  double offset_e_y = 0.3;            // m, uniform half-range
  double offset_e_psi = 0.05;         // rad
};

/// Table-driven roles of the three shipped cases:
///   1: train map1, validate map1
///   2: train map1, validate map2
///   3: train map3, validate map2
/// Remaining knobs come from the config.
CaseSpec builtin_case(int id, const Config& cfg);

struct CaseResult {
  CaseSpec spec;
  SimLog collect_log;   // driver-in-the-loop training run
  SimLog lqr_log;       // validation, LQR only
  SimLog ndob_log;      // validation, LQR + learned compensation
  Mlp model;
  Standardizer standardizer;
  TrainReport train_report;
  RmseReport report;
  DatasetBuildReport dataset_report;
};

struct CaseAssets {
  VehicleParams vehicle;
  DiscreteModel model;
  LqrDesign lqr;
  const RoadMap* train_map = nullptr;
  const RoadMap* val_map = nullptr;
  DriverParams driver;
};

CaseAssets assemble_case_assets(const CaseSpec& spec, const Config& cfg,
                                const BuiltinMaps& maps);

/// collect on the training map -> build dataset -> train -> validate the
/// Lqr and LqrNeurodob stacks on the validation map -> RMSE report.
/// Deterministic for a fixed spec.seed. A pretrained model (with its
/// standardizer) skips the collect/train stages.
CaseResult run_case(const CaseSpec& spec, const CaseAssets& assets);
CaseResult run_case_with_model(const CaseSpec& spec, const CaseAssets& assets,
                               Mlp model, Standardizer standardizer);

std::string train_report_csv(const TrainReport& report);

}  // namespace ndob
