#include "neurodob/driver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurodob/errors.hpp"

namespace ndob {

DriverParams driver_profile(std::string_view name) {
  if (name == "smooth") {
    return {0.6, 0.12, 0.4, 0.15};
  }
  if (name == "aggressive") {
    return {0.2, 0.3, 0.8, 0.04};
  }
  throw ConfigError("unknown driver profile: " + std::string(name));
}

void validate(const DriverParams& p) {
  if (!(p.preview_time >= 0.0) || !(p.smoothing_tau >= 0.0)) {
    throw ConfigError("driver preview_time and smoothing_tau must be >= 0");
  }
}

double understeer_gradient(const VehicleParams& p) {
  const double wheelbase = p.lf + p.lr;
  return p.m * (p.car * p.lr - p.caf * p.lf) /
         (2.0 * p.caf * p.car * wheelbase * wheelbase);
}

double steady_state_steer(const VehicleParams& p, double kappa) {
  const double wheelbase = p.lf + p.lr;
  return kappa * wheelbase * (1.0 + understeer_gradient(p) * p.vx * p.vx);
}

std::pair<double, DriverState> driver_command(const DriverParams& params,
                                              const ErrorState& x,
                                              const RoadMap& map, double s_now,
                                              const VehicleParams& vehicle,
                                              DriverState state) {
  const double s_preview =
      std::min(s_now + vehicle.vx * params.preview_time, map.total_length);
  const double kappa_preview = curvature_at(map, s_preview);

  const double raw = steady_state_steer(vehicle, kappa_preview) -
                     params.gain_ey * x.e_y - params.gain_epsi * x.e_psi;

  if (params.smoothing_tau > 0.0) {
    const double a = 1.0 - std::exp(-vehicle.ts / params.smoothing_tau);
    state.delta += a * (raw - state.delta);
  } else {
    state.delta = raw;
  }
  return {state.delta, state};
}

}  // namespace ndob
