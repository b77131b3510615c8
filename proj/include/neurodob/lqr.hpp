#pragma once

#include <Eigen/Dense>

#include "neurodob/vehicle.hpp"

namespace ndob {

struct LqrWeights {
  Eigen::Matrix4d Q;  // symmetric PSD state weighting
  double r = 1.0;     // positive control weighting (scalar input)
};

/// Q = diag(1, 0, 1, 0), r = 10: soft gains that track but visibly lag on
/// sharp curves, leaving a learnable residual for the compensator.
LqrWeights default_lqr_weights();

void validate(const LqrWeights& w);

struct LqrDesign {
  Eigen::RowVector4d K;          // state feedback gain
  Eigen::Matrix4d P;             // Riccati solution
  double spectral_radius_cl = 0.0;  // rho(Phi - Gamma K), < 1
};

/// Dimension-generic DARE fixed point via iteration on the Riccati map with
/// symmetrization each sweep. Returns P with
/// ||P - riccati_map(P)||_F <= tol. Throws NotConverged.
Eigen::MatrixXd solve_dare_generic(const Eigen::MatrixXd& Phi,
                                   const Eigen::MatrixXd& Gamma,
                                   const Eigen::MatrixXd& Q,
                                   const Eigen::MatrixXd& R,
                                   double tol = 1e-10,
                                   long max_iter = 1000000);

/// Synthesizes the baseline gain K = (R + G'PG)^-1 G'P Phi for the vehicle
/// model and verifies the closed loop is Schur (else UnstableClosedLoop).
LqrDesign solve_dare(const DiscreteModel& model, const LqrWeights& weights,
                     double tol = 1e-10, long max_iter = 1000000);

inline double lqr_command(const LqrDesign& design, const ErrorState& x) {
  return -(design.K * x.vec())(0);
}

}  // namespace ndob
