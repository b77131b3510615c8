#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "neurodob/lqr.hpp"
#include "neurodob/sim.hpp"
#include "neurodob/vehicle.hpp"

namespace ndob {

/// Practical-stability certificate for the compensated closed loop
/// x[k+1] = Phi_cl x[k] + Gamma w[k] + Gamma2 psi_dot_des[k] with
/// |w| <= eps1 and |psi_dot_des| <= eps2.
///
/// P solves Phi_cl' P Phi_cl - P = -Q0. With
///   alpha = ||Phi_cl' P Gamma||,  beta  = ||Phi_cl' P Gamma2||,
///   gamma = ||P^(1/2) Gamma||,    delta = ||P^(1/2) Gamma2||,
/// bounding the Lyapunov increment and splitting the cross term with
/// 2ab <= mu a^2 + b^2/mu at mu = lambda_min(Q0)/2 gives
///   V(x+) - V(x) <= -1/2 lambda_min(Q0) ||x||^2 + c1 eps1^2 + c2 eps2^2,
///   c1 = 2 alpha^2 / mu + 2 gamma^2,  c2 = 2 beta^2 / mu + 2 delta^2.
/// The sub-level set argument with lambda_min(P)||x||^2 <= V <=
/// lambda_max(P)||x||^2 then yields the ultimate bound
///   eta = sqrt( (c1 eps1^2 + c2 eps2^2) / (1/2 lambda_min(Q0))
///               * lambda_max(P) / lambda_min(P) ).
struct StabilityCert {
  Eigen::Matrix4d phi_cl;
  Eigen::Matrix4d p;
  Eigen::Matrix4d q0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_c = 0.0;
  double delta_c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eta = 0.0;
  double lyap_residual = 0.0;
  double spectral_radius_cl = 0.0;
};

/// Smith (doubling) iteration for Phi' P Phi - P = -Q0; requires Phi Schur.
/// Returns P with ||Phi' P Phi - P + Q0||_F <= tol.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& q0,
                                        double tol = 1e-12);

StabilityCert certify(const DiscreteModel& model, const LqrDesign& design,
                      double eps1, double eps2,
                      const Eigen::Matrix4d& q0 = Eigen::Matrix4d::Identity());

struct BoundCheckReport {
  double eta = 0.0;
  double max_norm_post_burn_in = 0.0;
  bool bound_holds = false;
  bool decrement_holds = false;     // per-step Lyapunov inequality, all steps
  double worst_decrement_slack = 0.0;  // min over steps of (rhs - lhs)
  std::size_t steps_checked = 0;
};

/// Verifies Theorem-style guarantees on a logged nominal-plant run whose
/// compensation respected eps1 and whose psi_dot_des respected eps2:
/// the per-step decrement inequality at every step, and the ultimate bound
/// on the post-burn-in state norm. Violations are report outcomes.
BoundCheckReport empirical_bound_check(const StabilityCert& cert,
                                       const SimLog& log, double burn_in_s);

/// Nominal-plant run with delta_f = delta_lqr + w[k], where w is a synthetic
/// clamped compensation: constant +eps1, or seeded uniform in [-eps1, eps1].
/// Produces clamp-respecting logs for empirical certificate checks.
enum class SyntheticCompensation { ConstantMax, SeededUniform };
SimLog synthetic_clamped_run(const DiscreteModel& model,
                             const LqrDesign& design, const RoadMap& map,
                             const VehicleParams& vehicle, double eps1,
                             SyntheticCompensation kind, std::uint64_t seed,
                             double duration, const ErrorState& x0);

void save_certificate(const std::string& path, const StabilityCert& cert);

}  // namespace ndob
