#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neurodob/dob.hpp"
#include "neurodob/driver.hpp"
#include "neurodob/lqr.hpp"
#include "neurodob/neurodob.hpp"
#include "neurodob/road.hpp"
#include "neurodob/vehicle.hpp"

namespace ndob {

enum class Stack { DriverOnly, Lqr, LqrDob, LqrNeurodob };

Stack stack_from_name(const std::string& name);
std::string stack_name(Stack stack);

struct ScenarioConfig {
  Stack stack = Stack::Lqr;
  double duration = 100.0;  // s
  double s0 = 0.0;          // starting station, m
  PlantConfig plant;
  std::string driver_profile = "smooth";
  std::uint64_t seed = 0;
  ErrorState x0{};
  double steer_limit = 0.6;  // rad, actuator range
  CompensationLimits limits{};
};

struct SimRecord {
  double t = 0.0;
  double s = 0.0;             // station, m
  double kappa = 0.0;         // 1/m
  double psi_dot_des = 0.0;   // rad/s
  ErrorState x;
  double delta_lqr = 0.0;
  double delta_c = 0.0;
  double delta_f = 0.0;
  double delta_d = 0.0;
  double d_hat = 0.0;
  bool steer_clamped = false;  // actuator limit engaged this step
};

struct SimLog {
  std::vector<SimRecord> rows;
  std::string scenario;          // "<map>/<stack>"
  std::string map_name;
  std::uint64_t params_hash = 0;
  double ts = 0.0;
  double vx = 0.0;
  bool diverged = false;         // aborted with a partial log
};

/// Everything a scenario may need; pointers stay null for stacks that do not
/// use them (run_scenario validates).
struct SimAssets {
  const RoadMap* map = nullptr;
  VehicleParams vehicle{};
  DiscreteModel model{};
  LqrDesign lqr{};
  const DobDesign* dob = nullptr;
  const Mlp* mlp = nullptr;
  const Standardizer* standardizer = nullptr;
  DriverParams driver{};
};

/// The plant configuration a scenario actually runs: the dither stream is
/// reseeded from the scenario seed so logged runs can be replayed exactly.
PlantConfig effective_plant_config(const ScenarioConfig& cfg);

/// Advances the plant along the map under the selected stack, logging every
/// step. delta_lqr is always computed (a shadow signal when not applied).
/// Divergence (non-finite state or |e_y| > 10 m) stops the run and returns
/// the partial log with `diverged` set.
SimLog run_scenario(const ScenarioConfig& cfg, const SimAssets& assets);

/// Driver-in-the-loop data collection: the driver steers the plant while the
/// LQR command is logged as a shadow signal. Equivalent to a DriverOnly run.
SimLog collect_training_run(const ScenarioConfig& cfg, const SimAssets& assets);

std::vector<LogRow> training_rows(const SimLog& log);

/// Full log CSV: the training columns plus
/// kappa,psi_dot_des,delta_c,delta_f,d_hat.
void save_log_csv(const std::string& path, const SimLog& log);
SimLog load_log_csv(const std::string& path);

/// Sidecar metadata (key: value lines).
void save_log_meta(const std::string& path, const SimLog& log);

}  // namespace ndob
