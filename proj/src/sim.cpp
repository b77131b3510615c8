#include "neurodob/sim.hpp"

#include <cmath>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

Stack stack_from_name(const std::string& name) {
  if (name == "driver") return Stack::DriverOnly;
  if (name == "lqr") return Stack::Lqr;
  if (name == "dob") return Stack::LqrDob;
  if (name == "neurodob") return Stack::LqrNeurodob;
  throw ConfigError("unknown stack: " + name +
                    " (expected driver|lqr|dob|neurodob)");
}

std::string stack_name(Stack stack) {
  switch (stack) {
    case Stack::DriverOnly: return "driver";
    case Stack::Lqr: return "lqr";
    case Stack::LqrDob: return "dob";
    case Stack::LqrNeurodob: return "neurodob";
  }
  return "?";
}

namespace {

constexpr double kDivergenceEy = 10.0;  // m

std::uint64_t hash_scenario(const ScenarioConfig& cfg, const SimAssets& a) {
  std::string repr = a.map->name + "|" + stack_name(cfg.stack) + "|" +
                     g17(cfg.duration) + "|" + g17(cfg.plant.stiffness_scale) +
                     "|" + g17(cfg.plant.mass_scale) + "|" +
                     g17(cfg.plant.input_bias) + "|" +
                     g17(cfg.plant.input_lag_tau) + "|" +
                     g17(cfg.plant.tire_sat_alpha) + "|" +
                     g17(cfg.plant.dither_std) + "|" +
                     (cfg.plant.variant == PlantVariant::Nominal ? "nom"
                                                                 : "pert") +
                     "|" + cfg.driver_profile + "|" +
                     std::to_string(cfg.seed) + "|" + g17(a.vehicle.vx) + "|" +
                     g17(a.vehicle.ts) + "|" + g17(cfg.steer_limit) + "|" +
                     g17(cfg.limits.epsilon1);
  return Rng::fnv1a(repr);
}

}  // namespace

PlantConfig effective_plant_config(const ScenarioConfig& cfg) {
  PlantConfig plant_cfg = cfg.plant;
  plant_cfg.dither_seed = cfg.seed ^ Rng::fnv1a("plant-dither");
  return plant_cfg;
}

SimLog run_scenario(const ScenarioConfig& cfg, const SimAssets& assets) {
  if (assets.map == nullptr) throw ConfigError("run_scenario: map missing");
  const VehicleParams& veh = assets.vehicle;
  validate(veh);
  if (cfg.s0 < 0.0 ||
      cfg.s0 + cfg.duration * veh.vx > assets.map->total_length + 1e-9) {
    throw ConfigError("map too short: need " +
                      g17(cfg.s0 + cfg.duration * veh.vx) + " m, have " +
                      g17(assets.map->total_length));
  }
  const bool needs_dob = cfg.stack == Stack::LqrDob;
  const bool needs_net = cfg.stack == Stack::LqrNeurodob;
  if (needs_dob && assets.dob == nullptr) {
    throw ConfigError("dob stack without a dob design");
  }
  if (needs_net &&
      (assets.mlp == nullptr || assets.standardizer == nullptr)) {
    throw ConfigError("neurodob stack without a trained model");
  }

  const Plant plant = make_plant(veh, effective_plant_config(cfg));
  DriverParams driver = assets.driver;
  validate(driver);

  // the driver steers the car it actually drives: its feedforward uses the
  // effective (possibly perturbed) physical parameters, the way an embedded
  // reference controller is matched to its own vehicle
  VehicleParams driver_vehicle = veh;
  if (cfg.plant.variant == PlantVariant::Perturbed) {
    driver_vehicle.caf *= cfg.plant.stiffness_scale;
    driver_vehicle.car *= cfg.plant.stiffness_scale;
    driver_vehicle.m *= cfg.plant.mass_scale;
    driver_vehicle.iz *= cfg.plant.mass_scale;
  }

  SimLog log;
  log.scenario = assets.map->name + "/" + stack_name(cfg.stack);
  log.map_name = assets.map->name;
  log.ts = veh.ts;
  log.vx = veh.vx;
  log.params_hash = hash_scenario(cfg, assets);

  const auto steps = static_cast<std::size_t>(
      std::llround(cfg.duration / veh.ts));
  log.rows.reserve(steps);

  ErrorState x = cfg.x0;
  PlantInternalState plant_state{};
  DriverState driver_state{};
  DobState dob_state{};

  for (std::size_t k = 0; k < steps; ++k) {
    SimRecord rec;
    rec.t = static_cast<double>(k) * veh.ts;
    rec.s = cfg.s0 + veh.vx * rec.t;
    rec.kappa = curvature_at(*assets.map, rec.s);
    rec.psi_dot_des = veh.vx * rec.kappa;
    rec.x = x;
    rec.delta_lqr = lqr_command(assets.lqr, x);

    switch (cfg.stack) {
      case Stack::DriverOnly: {
        auto [delta_d, dstate] = driver_command(driver, x, *assets.map, rec.s,
                                                driver_vehicle, driver_state);
        driver_state = dstate;
        rec.delta_d = delta_d;
        rec.delta_f = delta_d;
        break;
      }
      case Stack::Lqr: {
        rec.delta_f = rec.delta_lqr;
        break;
      }
      case Stack::LqrDob: {
        auto [dstate, d_hat] = dob_update(
            *assets.dob, dob_state, x,
            log.rows.empty() ? 0.0 : log.rows.back().delta_f);
        dob_state = dstate;
        rec.d_hat = d_hat;
        rec.delta_f = dob_compensate(rec.delta_lqr, d_hat);
        break;
      }
      case Stack::LqrNeurodob: {
        const FeatureVector features = FeatureVector::from(x, rec.delta_lqr);
        rec.delta_c = compensate(*assets.mlp, *assets.standardizer,
                                 cfg.limits, features);
        rec.delta_f =
            final_command(rec.delta_lqr, rec.delta_c, cfg.steer_limit);
        rec.steer_clamped =
            rec.delta_f != rec.delta_lqr + rec.delta_c;
        break;
      }
    }

    log.rows.push_back(rec);

    try {
      auto [next, pstate] =
          plant_step(plant, x, rec.delta_f, rec.psi_dot_des, plant_state);
      x = next;
      plant_state = pstate;
    } catch (const NonFiniteState&) {
      log.diverged = true;
      break;
    }
    if (std::abs(x.e_y) > kDivergenceEy) {
      log.diverged = true;
      break;
    }
  }
  return log;
}

SimLog collect_training_run(const ScenarioConfig& cfg,
                            const SimAssets& assets) {
  ScenarioConfig collect_cfg = cfg;
  collect_cfg.stack = Stack::DriverOnly;
  return run_scenario(collect_cfg, assets);
}

std::vector<LogRow> training_rows(const SimLog& log) {
  std::vector<LogRow> rows;
  rows.reserve(log.rows.size());
  for (const auto& r : log.rows) {
    rows.push_back({r.t, r.x.e_y, r.x.e_y_dot, r.x.e_psi, r.x.e_psi_dot,
                    r.delta_lqr, r.delta_d});
  }
  return rows;
}

namespace {
constexpr const char* kLogHeader =
    "t_s,e_y,e_y_dot,e_psi,e_psi_dot,delta_lqr,delta_d,"
    "kappa,psi_dot_des,delta_c,delta_f,d_hat";
}

void save_log_csv(const std::string& path, const SimLog& log) {
  std::string out = kLogHeader;
  out += '\n';
  for (const auto& r : log.rows) {
    const double cols[] = {r.t,       r.x.e_y,   r.x.e_y_dot, r.x.e_psi,
                           r.x.e_psi_dot, r.delta_lqr, r.delta_d,
                           r.kappa,   r.psi_dot_des, r.delta_c, r.delta_f,
                           r.d_hat};
    for (std::size_t i = 0; i < 12; ++i) {
      if (i > 0) out += ',';
      out += g17(cols[i]);
    }
    out += '\n';
  }
  write_file(path, out);
}

SimLog load_log_csv(const std::string& path) {
  auto lines = split(read_file(path), '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty() || trim(lines[0]) != kLogHeader) {
    throw IoFailure("bad log CSV header in " + path);
  }
  SimLog log;
  log.rows.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cols = split(lines[li], ',');
    if (cols.size() != 12) {
      throw IoFailure("bad log CSV row " + std::to_string(li + 1));
    }
    double v[12];
    for (std::size_t i = 0; i < 12; ++i) v[i] = parse_double(trim(cols[i]));
    SimRecord r;
    r.t = v[0];
    r.x = {v[1], v[2], v[3], v[4]};
    r.delta_lqr = v[5];
    r.delta_d = v[6];
    r.kappa = v[7];
    r.psi_dot_des = v[8];
    r.delta_c = v[9];
    r.delta_f = v[10];
    r.d_hat = v[11];
    r.s = 0.0;  // not stored; reconstructed below when vx is known
    log.rows.push_back(r);
  }
  if (log.rows.size() >= 2) {
    log.ts = log.rows[1].t - log.rows[0].t;
  }
  return log;
}

void save_log_meta(const std::string& path, const SimLog& log) {
  std::size_t clamped = 0;
  for (const auto& r : log.rows) clamped += r.steer_clamped ? 1u : 0u;
  std::string out;
  out += "scenario: " + log.scenario + "\n";
  out += "map: " + log.map_name + "\n";
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(log.params_hash));
  out += std::string("params_hash: ") + hash + "\n";
  out += "ts: " + g17(log.ts) + "\n";
  out += "vx: " + g17(log.vx) + "\n";
  out += "rows: " + std::to_string(log.rows.size()) + "\n";
  out += "diverged: " + std::string(log.diverged ? "true" : "false") + "\n";
  out += "steer_clamped_rows: " + std::to_string(clamped) + "\n";
  write_file(path, out);
}

}  // namespace ndob
