#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <utility>

namespace ndob {

/// Physical constants of the single-track lateral model plus the run's fixed
/// longitudinal speed and sampling time.
struct VehicleParams {
  double m;    // mass, kg
  double iz;   // yaw inertia, kg m^2
  double lf;   // CG to front axle, m
  double lr;   // CG to rear axle, m
  double caf;  // front cornering stiffness, N/rad
  double car;  // rear cornering stiffness, N/rad
  double vx;   // longitudinal speed, m/s (fixed per run)
  double ts;   // sampling time, s
};

/// Shipped test-vehicle parameter set (compact SUV class, 50 km/h).
VehicleParams default_vehicle_params();

/// Throws ConfigError / SingularSpeed when an invariant is violated
/// (all fields strictly positive, vx > 0.1 m/s, ts <= 0.05 s).
void validate(const VehicleParams& p);

/// Lane-relative error state [e_y, e_y_dot, e_psi, e_psi_dot].
struct ErrorState {
  double e_y = 0.0;       // lateral offset from lane center, m
  double e_y_dot = 0.0;   // m/s
  double e_psi = 0.0;     // heading error, rad
  double e_psi_dot = 0.0; // rad/s

  Eigen::Vector4d vec() const { return {e_y, e_y_dot, e_psi, e_psi_dot}; }
  static ErrorState from_vec(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  bool finite() const;
};

/// Continuous-time error dynamics  x_dot = A x + B u + B2 psi_dot_des.
struct ContinuousModel {
  Eigen::Matrix4d A;
  Eigen::Vector4d B;
  Eigen::Vector4d B2;
};

/// Forward-Euler discretization: Phi = I + Ts A, Gamma = Ts B, Gamma2 = Ts B2.
struct DiscreteModel {
  Eigen::Matrix4d Phi;
  Eigen::Vector4d Gamma;
  Eigen::Vector4d Gamma2;
  double ts = 0.0;
};

ContinuousModel build_continuous(const VehicleParams& p);
DiscreteModel discretize(const ContinuousModel& cm, double ts);

enum class PlantVariant { Nominal, Perturbed };

/// Knobs of the perturbed plant standing in for unmodeled dynamics. Each knob
/// is independently verifiable: with scales = 1, bias = 0, lag = 0 and
/// saturation disabled the perturbed step equals the nominal one exactly.
struct PlantConfig {
  PlantVariant variant = PlantVariant::Nominal;
  double stiffness_scale = 1.0;  // applied to caf and car, in (0.5, 2]
  double mass_scale = 1.0;       // applied to m and iz, in (0.5, 2]
  double input_bias = 0.0;       // constant steering offset, rad
  double input_lag_tau = 0.0;    // first-order actuator lag, s (0 = none)
  double tire_sat_alpha =
      std::numeric_limits<double>::infinity();  // slip-angle saturation, rad
  // seeded input-channel roughness (crosswind / road texture stand-in):
  // first-order colored noise with stationary std dither_std and correlation
  // time dither_tau, driven by a pure function of (dither_seed, step index),
  // so replaying a logged command sequence reproduces the same trajectory
  double dither_std = 0.0;   // rad
  double dither_tau = 0.7;   // s
  std::uint64_t dither_seed = 0;
};

void validate(const PlantConfig& cfg);

struct PlantInternalState {
  double steer_lag = 0.0;       // lagged actuator position, rad
  double dither = 0.0;          // colored-noise state, rad
  std::uint64_t step = 0;       // drives the seeded dither sequence
};

/// A steppable plant: nominal discrete matrices plus (for the perturbed
/// variant) the physical parameters needed to evaluate the nonlinear
/// axle-force form of the same dynamics.
struct Plant {
  VehicleParams params;
  PlantConfig cfg;
  DiscreteModel nominal;
  // cached perturbed physical parameters
  double caf_p = 0.0, car_p = 0.0, m_p = 0.0, iz_p = 0.0;
};

Plant make_plant(const VehicleParams& p, const PlantConfig& cfg);

/// Advances one sampling step. The nominal variant is exactly
/// Phi x + Gamma delta_f + Gamma2 psi_dot_des; the perturbed variant runs the
/// axle-force form with scaled stiffness/mass, actuator bias and lag, and
/// saturated slip angles, under the same forward-Euler rule.
/// Throws NonFiniteState if the result diverges.
std::pair<ErrorState, PlantInternalState> plant_step(
    const Plant& plant, const ErrorState& x, double delta_f,
    double psi_dot_des, PlantInternalState internal);

}  // namespace ndob
