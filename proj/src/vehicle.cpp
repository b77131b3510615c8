#include "neurodob/vehicle.hpp"

#include <cmath>

#include "neurodob/errors.hpp"

namespace ndob {

namespace {
constexpr double kMinSpeed = 0.1;  // m/s; the A matrix divides by vx
}

VehicleParams default_vehicle_params() {
  VehicleParams p;
  p.m = 1274.0;
  p.iz = 1523.0;
  p.lf = 1.016;
  p.lr = 1.562;
  p.caf = 118800.0;
  p.car = 165300.0;
  p.vx = 50.0 / 3.6;
  p.ts = 0.01;
  return p;
}

void validate(const VehicleParams& p) {
  const double fields[] = {p.m, p.iz, p.lf, p.lr, p.caf, p.car, p.vx, p.ts};
  for (const double f : fields) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw ConfigError("vehicle parameters must be strictly positive");
    }
  }
  if (p.vx <= kMinSpeed) {
    throw SingularSpeed("vx must exceed 0.1 m/s");
  }
  if (p.ts > 0.05) {
    throw ConfigError("sampling time must be <= 0.05 s");
  }
}

bool ErrorState::finite() const {
  return std::isfinite(e_y) && std::isfinite(e_y_dot) && std::isfinite(e_psi) &&
         std::isfinite(e_psi_dot);
}

ContinuousModel build_continuous(const VehicleParams& p) {
  validate(p);
  const double cs = p.caf + p.car;        // stiffness sum
  const double cd = p.caf * p.lf - p.car * p.lr;  // stiffness moment
  const double cq = p.caf * p.lf * p.lf + p.car * p.lr * p.lr;

  ContinuousModel cm;
  cm.A.setZero();
  cm.A(0, 1) = 1.0;
  cm.A(1, 1) = -2.0 * cs / (p.m * p.vx);
  cm.A(1, 2) = 2.0 * cs / p.m;
  cm.A(1, 3) = -2.0 * cd / (p.m * p.vx);
  cm.A(2, 3) = 1.0;
  cm.A(3, 1) = -2.0 * cd / (p.iz * p.vx);
  cm.A(3, 2) = 2.0 * cd / p.iz;
  cm.A(3, 3) = -2.0 * cq / (p.iz * p.vx);

  cm.B.setZero();
  cm.B(1) = 2.0 * p.caf / p.m;
  cm.B(3) = 2.0 * p.caf * p.lf / p.iz;

  cm.B2.setZero();
  cm.B2(1) = -2.0 * cd / (p.m * p.vx) - p.vx;
  cm.B2(3) = -2.0 * cq / (p.iz * p.vx);
  return cm;
}

DiscreteModel discretize(const ContinuousModel& cm, double ts) {
  if (!(ts >= 0.0)) throw ConfigError("ts must be >= 0");
  DiscreteModel dm;
  dm.Phi = Eigen::Matrix4d::Identity() + ts * cm.A;
  dm.Gamma = ts * cm.B;
  dm.Gamma2 = ts * cm.B2;
  dm.ts = ts;
  return dm;
}

void validate(const PlantConfig& cfg) {
  if (!(cfg.stiffness_scale > 0.5) || !(cfg.stiffness_scale <= 2.0)) {
    throw ConfigError("stiffness_scale must lie in (0.5, 2]");
  }
  if (!(cfg.mass_scale > 0.5) || !(cfg.mass_scale <= 2.0)) {
    throw ConfigError("mass_scale must lie in (0.5, 2]");
  }
  if (!(cfg.input_lag_tau >= 0.0)) {
    throw ConfigError("input_lag_tau must be >= 0");
  }
  if (!(cfg.tire_sat_alpha > 0.0)) {
    throw ConfigError("tire_sat_alpha must be > 0 (inf disables)");
  }
  if (!(cfg.dither_std >= 0.0) || !(cfg.dither_tau > 0.0)) {
    throw ConfigError("dither_std must be >= 0 and dither_tau > 0");
  }
}

Plant make_plant(const VehicleParams& p, const PlantConfig& cfg) {
  validate(p);
  validate(cfg);
  Plant plant;
  plant.params = p;
  plant.cfg = cfg;
  plant.nominal = discretize(build_continuous(p), p.ts);
  plant.caf_p = p.caf * cfg.stiffness_scale;
  plant.car_p = p.car * cfg.stiffness_scale;
  plant.m_p = p.m * cfg.mass_scale;
  plant.iz_p = p.iz * cfg.mass_scale;
  return plant;
}

namespace {

double saturate_slip(double alpha, double limit) {
  if (!std::isfinite(limit)) return alpha;
  return limit * std::tanh(alpha / limit);
}

// stateless gaussian draw for step k of the dither stream
double dither_at(std::uint64_t seed, std::uint64_t step) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  const std::uint64_t a = mix(seed ^ mix(step));
  const std::uint64_t b = mix(a);
  const double u1 =
      (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;  // (0, 1)
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::pair<ErrorState, PlantInternalState> plant_step(
    const Plant& plant, const ErrorState& x, double delta_f,
    double psi_dot_des, PlantInternalState internal) {
  if (!x.finite() || !std::isfinite(delta_f)) {
    throw NonFiniteState("plant_step input not finite");
  }

  Eigen::Vector4d next;
  if (plant.cfg.variant == PlantVariant::Nominal) {
    next = plant.nominal.Phi * x.vec() + plant.nominal.Gamma * delta_f +
           plant.nominal.Gamma2 * psi_dot_des;
  } else {
    const VehicleParams& p = plant.params;
    const PlantConfig& cfg = plant.cfg;

    double delta_act = delta_f;
    if (cfg.input_lag_tau > 0.0) {
      const double a = 1.0 - std::exp(-p.ts / cfg.input_lag_tau);
      internal.steer_lag += a * (delta_f - internal.steer_lag);
      delta_act = internal.steer_lag;
    }
    delta_act += cfg.input_bias;
    if (cfg.dither_std > 0.0) {
      const double a = std::exp(-p.ts / cfg.dither_tau);
      internal.dither =
          a * internal.dither +
          cfg.dither_std * std::sqrt(1.0 - a * a) *
              dither_at(cfg.dither_seed, internal.step);
      delta_act += internal.dither;
    }
    internal.step += 1;

    // Axle-force form of the same error dynamics: when the slip angles stay
    // linear this reproduces Phi x + Gamma delta + Gamma2 psi_dot_des exactly.
    const double psi_dot = x.e_psi_dot + psi_dot_des;  // total yaw rate
    const double alpha_f =
        delta_act + x.e_psi - (x.e_y_dot + p.lf * psi_dot) / p.vx;
    const double alpha_r = x.e_psi - (x.e_y_dot - p.lr * psi_dot) / p.vx;
    const double ff =
        2.0 * plant.caf_p * saturate_slip(alpha_f, cfg.tire_sat_alpha);
    const double fr =
        2.0 * plant.car_p * saturate_slip(alpha_r, cfg.tire_sat_alpha);

    const double ey_dd = (ff + fr) / plant.m_p - p.vx * psi_dot_des;
    const double epsi_dd = (p.lf * ff - p.lr * fr) / plant.iz_p;

    next[0] = x.e_y + p.ts * x.e_y_dot;
    next[1] = x.e_y_dot + p.ts * ey_dd;
    next[2] = x.e_psi + p.ts * x.e_psi_dot;
    next[3] = x.e_psi_dot + p.ts * epsi_dd;
  }

  const ErrorState out = ErrorState::from_vec(next);
  if (!out.finite()) {
    throw NonFiniteState("plant state diverged to NaN/Inf");
  }
  return {out, internal};
}

}  // namespace ndob
