#include "neurodob/lqr.hpp"

#include <cmath>

#include "neurodob/errors.hpp"
#include "neurodob/linalg.hpp"

namespace ndob {

LqrWeights default_lqr_weights() {
  LqrWeights w;
  w.Q = Eigen::Vector4d(1.0, 0.0, 1.0, 0.0).asDiagonal();
  w.r = 10.0;
  return w;
}

void validate(const LqrWeights& w) {
  if (!(w.r > 0.0)) throw ConfigError("lqr weight r must be > 0");
  if ((w.Q - w.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("lqr weight Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(w.Q);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw ConfigError("lqr weight Q must be positive semidefinite");
  }
}

namespace {

Eigen::MatrixXd riccati_map(const Eigen::MatrixXd& P,
                            const Eigen::MatrixXd& Phi,
                            const Eigen::MatrixXd& Gamma,
                            const Eigen::MatrixXd& Q,
                            const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd gpg = R + Gamma.transpose() * P * Gamma;
  const Eigen::MatrixXd k = gpg.ldlt().solve(Gamma.transpose() * P * Phi);
  return Phi.transpose() * P * (Phi - Gamma * k) + Q;
}

}  // namespace

Eigen::MatrixXd solve_dare_generic(const Eigen::MatrixXd& Phi,
                                   const Eigen::MatrixXd& Gamma,
                                   const Eigen::MatrixXd& Q,
                                   const Eigen::MatrixXd& R, double tol,
                                   long max_iter) {
  Eigen::MatrixXd P = Q;
  for (long it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd next = riccati_map(P, Phi, Gamma, Q, R);
    next = 0.5 * (next + next.transpose());
    const double residual = (next - P).norm();
    P = next;
    if (residual <= tol) return P;
  }
  throw NotConverged("DARE iteration did not reach tolerance");
}

LqrDesign solve_dare(const DiscreteModel& model, const LqrWeights& weights,
                     double tol, long max_iter) {
  validate(weights);
  Eigen::MatrixXd r(1, 1);
  r(0, 0) = weights.r;
  const Eigen::MatrixXd P =
      solve_dare_generic(model.Phi, model.Gamma, weights.Q, r, tol, max_iter);

  LqrDesign design;
  design.P = P;
  const double denom = weights.r + (model.Gamma.transpose() * P * model.Gamma)(0);
  design.K = (model.Gamma.transpose() * P * model.Phi) / denom;
  design.spectral_radius_cl =
      spectral_radius(model.Phi - model.Gamma * design.K);
  if (!(design.spectral_radius_cl < 1.0)) {
    throw UnstableClosedLoop("closed loop not Schur: rho = " +
                             std::to_string(design.spectral_radius_cl));
  }
  return design;
}

}  // namespace ndob
