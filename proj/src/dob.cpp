#include "neurodob/dob.hpp"

#include <cmath>

#include "neurodob/errors.hpp"

namespace ndob {

DobDesign make_dob(const DiscreteModel& nominal, double q_cutoff_hz) {
  if (!(nominal.ts > 0.0)) throw ConfigError("dob needs a sampled model");
  const double nyquist = 0.5 / nominal.ts;
  if (!(q_cutoff_hz > 0.0) || !(q_cutoff_hz < nyquist)) {
    throw ConfigError("q_cutoff_hz must lie in (0, Nyquist)");
  }
  DobDesign d;
  d.phi_n = nominal.Phi;
  d.gamma_n = nominal.Gamma;
  d.c_n = Eigen::Matrix4d::Identity();
  d.q_cutoff_hz = q_cutoff_hz;
  d.ts = nominal.ts;
  return d;
}

std::pair<DobState, double> dob_update(const DobDesign& design, DobState state,
                                       const ErrorState& y, double u_applied) {
  if (!state.primed) {
    state.x_prev = y.vec();
    state.u_prev = u_applied;
    state.d_hat = 0.0;
    state.primed = true;
    return {state, 0.0};
  }
  const Eigen::Vector4d predicted =
      design.c_n * (design.phi_n * state.x_prev + design.gamma_n * state.u_prev);
  const Eigen::Vector4d residual = y.vec() - predicted;
  const double d_raw =
      design.gamma_n.dot(residual) / design.gamma_n.squaredNorm();
  const double a = 1.0 - std::exp(-2.0 * M_PI * design.q_cutoff_hz * design.ts);
  state.d_hat += a * (d_raw - state.d_hat);
  state.x_prev = y.vec();
  state.u_prev = u_applied;
  return {state, state.d_hat};
}

}  // namespace ndob
