#include "neurodob/settings.hpp"

#include <limits>

#include "neurodob/errors.hpp"

namespace ndob {

VehicleParams vehicle_from_config(const Config& cfg) {
  VehicleParams d = default_vehicle_params();
  VehicleParams p;
  p.m = cfg.get_double("vehicle", "m", d.m);
  p.iz = cfg.get_double("vehicle", "iz", d.iz);
  p.lf = cfg.get_double("vehicle", "lf", d.lf);
  p.lr = cfg.get_double("vehicle", "lr", d.lr);
  p.caf = cfg.get_double("vehicle", "caf", d.caf);
  p.car = cfg.get_double("vehicle", "car", d.car);
  p.vx = cfg.get_double("vehicle", "vx_kmh", d.vx * 3.6) / 3.6;
  p.ts = cfg.get_double("vehicle", "ts", d.ts);
  validate(p);
  return p;
}

LqrWeights lqr_weights_from_config(const Config& cfg) {
  LqrWeights w = default_lqr_weights();
  if (cfg.has("lqr", "q_diag")) {
    const auto diag = cfg.get_doubles("lqr", "q_diag");
    if (diag.size() != 4) {
      throw ConfigError("[lqr] q_diag needs exactly 4 values");
    }
    w.Q = Eigen::Vector4d(diag[0], diag[1], diag[2], diag[3]).asDiagonal();
  }
  w.r = cfg.get_double("lqr", "r", w.r);
  validate(w);
  return w;
}

double dob_cutoff_from_config(const Config& cfg) {
  return cfg.get_double("dob", "q_cutoff_hz", 2.0);
}

TrainConfig train_config_from_config(const Config& cfg) {
  TrainConfig t;
  t.lr = cfg.get_double("nn", "lr", t.lr);
  t.weight_decay = cfg.get_double("nn", "weight_decay", t.weight_decay);
  t.batch_size = static_cast<int>(cfg.get_int("nn", "batch_size", t.batch_size));
  t.max_epochs = static_cast<int>(cfg.get_int("nn", "max_epochs", t.max_epochs));
  t.plateau_factor = cfg.get_double("nn", "plateau_factor", t.plateau_factor);
  t.plateau_patience =
      static_cast<int>(cfg.get_int("nn", "plateau_patience", t.plateau_patience));
  t.early_stop_delta =
      cfg.get_double("nn", "early_stop_delta", t.early_stop_delta);
  t.early_stop_patience = static_cast<int>(
      cfg.get_int("nn", "early_stop_patience", t.early_stop_patience));
  t.val_fraction = cfg.get_double("nn", "val_fraction", t.val_fraction);
  validate(t);
  return t;
}

DriverParams driver_from_config(const Config& cfg,
                                const std::string& profile_override) {
  const std::string profile =
      profile_override.empty() ? cfg.get_str("driver", "profile", "smooth")
                               : profile_override;
  DriverParams p = driver_profile(profile);
  p.preview_time = cfg.get_double("driver", "preview_time", p.preview_time);
  p.gain_ey = cfg.get_double("driver", "gain_ey", p.gain_ey);
  p.gain_epsi = cfg.get_double("driver", "gain_epsi", p.gain_epsi);
  p.smoothing_tau = cfg.get_double("driver", "smoothing_tau", p.smoothing_tau);
  validate(p);
  return p;
}

PlantConfig plant_from_config(const Config& cfg, const std::string& section) {
  PlantConfig p;
  const std::string variant = cfg.get_str(section, "plant_variant", "perturbed");
  if (variant == "nominal") {
    p.variant = PlantVariant::Nominal;
  } else if (variant == "perturbed") {
    p.variant = PlantVariant::Perturbed;
  } else {
    throw ConfigError("[" + section + "] plant_variant must be nominal|perturbed");
  }
  p.stiffness_scale = cfg.get_double(section, "stiffness_scale", 0.8);
  p.mass_scale = cfg.get_double(section, "mass_scale", 1.15);
  p.input_bias = cfg.get_double(section, "input_bias", 0.0);
  p.input_lag_tau = cfg.get_double(section, "input_lag_tau", 0.05);
  const double sat = cfg.get_double(section, "tire_sat_alpha", 0.0);
  p.tire_sat_alpha =
      sat > 0.0 ? sat : std::numeric_limits<double>::infinity();
  p.dither_std = cfg.get_double(section, "dither_std", 0.0);
  p.dither_tau = cfg.get_double(section, "dither_tau", 0.7);
  validate(p);
  return p;
}

std::string default_config_text() {
  return R"(# neurodob workbench configuration
[vehicle]
m = 1274
iz = 1523
lf = 1.016
lr = 1.562
caf = 118800
car = 165300
vx_kmh = 50
ts = 0.01

[lqr]
q_diag = 1, 0, 1, 0
r = 10

[dob]
q_cutoff_hz = 2

[nn]
lr = 1e-3
weight_decay = 1e-4
batch_size = 64
max_epochs = 150
plateau_factor = 0.5
plateau_patience = 10
early_stop_delta = 1e-5
early_stop_patience = 50
val_fraction = 0.2

[driver]
profile = smooth

[sim]
duration = 100
seed = 0
steer_limit = 0.6
epsilon1 = 0.1
plant_variant = perturbed
stiffness_scale = 0.8
mass_scale = 1.15
input_bias = 0
input_lag_tau = 0.05
tire_sat_alpha = 0
dither_std = 0
dither_tau = 0.7

[case.1]
[case.2]
[case.3]
)";
}

std::string config_key_reference() {
  return R"(Config sections and keys (defaults in parentheses):
  [vehicle]  m (1274 kg), iz (1523 kg m^2), lf (1.016 m), lr (1.562 m),
             caf (118800 N/rad), car (165300 N/rad), vx_kmh (50), ts (0.01 s)
  [lqr]      q_diag (1,0,1,0), r (10)
  [dob]      q_cutoff_hz (2)
  [nn]       lr (1e-3), weight_decay (1e-4), batch_size (64),
             max_epochs (150), plateau_factor (0.5), plateau_patience (10),
             early_stop_delta (1e-5), early_stop_patience (50),
             val_fraction (0.2)
  [driver]   profile (smooth|aggressive), preview_time, gain_ey, gain_epsi,
             smoothing_tau
  [sim]      duration (100 s), seed (0), steer_limit (0.6 rad),
             epsilon1 (0.1 rad), plant_variant (perturbed|nominal),
             stiffness_scale (0.8), mass_scale (1.15), input_bias (0 rad),
             input_lag_tau (0.05 s), tire_sat_alpha (0 = disabled),
             dither_std (0 rad), dither_tau (0.7 s), collect_runs (24),
             offset_e_y (0.3 m), offset_e_psi (0.05 rad)
  [case.N]   train_map, val_map, driver_profile (override the built-in roles)
)";
}

}  // namespace ndob
