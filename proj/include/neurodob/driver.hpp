#pragma once

#include <string_view>
#include <utility>

#include "neurodob/road.hpp"
#include "neurodob/vehicle.hpp"

namespace ndob {

/// Preview steering law standing in for a human driver: curvature previewed
/// ahead of the vehicle feeds an Ackermann + understeer feedforward, small
/// error feedback trims residual offsets, and a first-order lag smooths the
/// command.
struct DriverParams {
  double preview_time = 0.6;    // s, >= 0
  double gain_ey = 0.12;        // rad per m of lateral error
  double gain_epsi = 0.4;       // rad per rad of heading error
  double smoothing_tau = 0.15;  // s, >= 0 (0 = no smoothing)
};

/// "smooth" (long preview, heavy smoothing) or "aggressive" (short preview,
/// high gains). Throws ConfigError for unknown names.
DriverParams driver_profile(std::string_view name);

void validate(const DriverParams& p);

struct DriverState {
  double delta = 0.0;  // smoothed steering output, rad
};

/// Understeer gradient in the form delta_ss = kappa L (1 + K_us Vx^2):
/// K_us = m (car lr - caf lf) / (2 caf car L^2).
double understeer_gradient(const VehicleParams& p);

/// Closed-form steady-state steering angle on an arc of curvature kappa.
double steady_state_steer(const VehicleParams& p, double kappa);

/// delta_d for the current step; deterministic. Previews curvature at
/// s_now + vx * preview_time (clamped to the map end).
std::pair<double, DriverState> driver_command(const DriverParams& params,
                                              const ErrorState& x,
                                              const RoadMap& map, double s_now,
                                              const VehicleParams& vehicle,
                                              DriverState state);

}  // namespace ndob
