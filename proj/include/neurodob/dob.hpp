#pragma once

#include <Eigen/Dense>
#include <utility>

#include "neurodob/vehicle.hpp"

namespace ndob {

/// Model-based disturbance observer: the residual between the measured state
/// and the nominal one-step prediction, projected onto the input channel and
/// passed through a first-order low-pass Q filter.
struct DobDesign {
  Eigen::Matrix4d phi_n;   // nominal transition
  Eigen::Vector4d gamma_n; // nominal input map (also the disturbance channel)
  Eigen::Matrix4d c_n;     // output map; identity (full-state measurement)
  double q_cutoff_hz = 2.0;
  double ts = 0.0;
};

/// Cutoff must lie in (0, Nyquist).
DobDesign make_dob(const DiscreteModel& nominal, double q_cutoff_hz);

struct DobState {
  Eigen::Vector4d x_prev = Eigen::Vector4d::Zero();
  double u_prev = 0.0;   // input applied while moving toward the next sample
  double d_hat = 0.0;    // filtered input-equivalent disturbance estimate
  bool primed = false;   // one-step history available
};

/// Consumes the newest measurement y together with u_applied, the command
/// being applied at y's time step. The returned estimate is built from the
/// residual of y against the prediction from the stored one-step history, so
/// the first call just primes the history and returns 0. The raw 4-vector
/// residual collapses to a scalar by least-squares projection onto gamma_n.
std::pair<DobState, double> dob_update(const DobDesign& design, DobState state,
                                       const ErrorState& y, double u_applied);

/// u_f = u_nominal - d_hat.
inline double dob_compensate(double u_nominal, double d_hat) {
  return u_nominal - d_hat;
}

/// 63% rise time of the Q filter, 1 / (2 pi f_c).
inline double dob_time_constant(const DobDesign& design) {
  return 1.0 / (2.0 * M_PI * design.q_cutoff_hz);
}

}  // namespace ndob
