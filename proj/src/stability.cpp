#include "neurodob/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "neurodob/errors.hpp"
#include "neurodob/linalg.hpp"
#include "neurodob/rng.hpp"
#include "neurodob/text.hpp"

namespace ndob {

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& q0,
                                        double tol) {
  if (phi.rows() != phi.cols() || q0.rows() != q0.cols() ||
      phi.rows() != q0.rows()) {
    throw ConfigError("lyapunov: dimension mismatch");
  }
  if (!is_schur(phi)) {
    throw NotSchur("lyapunov: matrix has spectral radius >= 1");
  }
  Eigen::MatrixXd p = q0;
  Eigen::MatrixXd m = phi;
  for (int it = 0; it < 200; ++it) {
    const Eigen::MatrixXd increment = m.transpose() * p * m;
    p += increment;
    p = 0.5 * (p + p.transpose()).eval();
    m = (m * m).eval();
    if (increment.norm() < 0.25 * tol) {
      const double residual = (phi.transpose() * p * phi - p + q0).norm();
      if (residual <= tol) return p;
    }
  }
  throw NotConverged("lyapunov doubling iteration stalled");
}

StabilityCert certify(const DiscreteModel& model, const LqrDesign& design,
                      double eps1, double eps2, const Eigen::Matrix4d& q0) {
  if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) {
    throw ConfigError("certify: eps bounds must be >= 0");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> q0_eig(q0);
  if (q0_eig.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError("certify: Q0 must be positive definite");
  }

  StabilityCert cert;
  cert.phi_cl = model.Phi - model.Gamma * design.K;
  cert.spectral_radius_cl = spectral_radius(cert.phi_cl);
  if (!(cert.spectral_radius_cl < 1.0)) {
    throw NotSchur("certify: closed loop not Schur");
  }
  cert.q0 = q0;
  cert.p = solve_discrete_lyapunov(cert.phi_cl, q0, 1e-10);
  cert.lyap_residual =
      (cert.phi_cl.transpose() * cert.p * cert.phi_cl - cert.p + q0).norm();

  const Eigen::Vector4d g = model.Gamma;
  const Eigen::Vector4d g2 = model.Gamma2;
  cert.alpha = (cert.phi_cl.transpose() * cert.p * g).norm();
  cert.beta = (cert.phi_cl.transpose() * cert.p * g2).norm();
  cert.gamma_c = std::sqrt(g.dot(cert.p * g));      // ||P^(1/2) Gamma||
  cert.delta_c = std::sqrt(g2.dot(cert.p * g2));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> p_eig(cert.p);
  const double p_min = p_eig.eigenvalues().minCoeff();
  const double p_max = p_eig.eigenvalues().maxCoeff();
  const double q_min = q0_eig.eigenvalues().minCoeff();
  const double mu = 0.5 * q_min;

  cert.c1 = 2.0 * cert.alpha * cert.alpha / mu + 2.0 * cert.gamma_c * cert.gamma_c;
  cert.c2 = 2.0 * cert.beta * cert.beta / mu + 2.0 * cert.delta_c * cert.delta_c;
  cert.eps1 = eps1;
  cert.eps2 = eps2;

  const double c = cert.c1 * eps1 * eps1 + cert.c2 * eps2 * eps2;
  cert.eta = std::sqrt(c / (0.5 * q_min) * (p_max / p_min));
  return cert;
}

BoundCheckReport empirical_bound_check(const StabilityCert& cert,
                                       const SimLog& log, double burn_in_s) {
  BoundCheckReport report;
  report.eta = cert.eta;
  if (log.rows.size() < 2) {
    throw ConfigError("bound check needs at least two log rows");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> q0_eig(cert.q0);
  const double q_min = q0_eig.eigenvalues().minCoeff();
  const double budget =
      cert.c1 * cert.eps1 * cert.eps1 + cert.c2 * cert.eps2 * cert.eps2;

  report.decrement_holds = true;
  report.worst_decrement_slack = std::numeric_limits<double>::infinity();
  double max_norm = 0.0;
  for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
    const Eigen::Vector4d x = log.rows[k].x.vec();
    const Eigen::Vector4d x_next = log.rows[k + 1].x.vec();
    const double v_now = x.dot(cert.p * x);
    const double v_next = x_next.dot(cert.p * x_next);
    const double lhs = v_next - v_now;
    const double rhs = -0.5 * q_min * x.squaredNorm() + budget;
    const double slack = rhs - lhs;
    if (slack < report.worst_decrement_slack) {
      report.worst_decrement_slack = slack;
    }
    if (slack < -1e-9) report.decrement_holds = false;
    if (log.rows[k + 1].t >= burn_in_s) {
      max_norm = std::max(max_norm, x_next.norm());
    }
    ++report.steps_checked;
  }
  report.max_norm_post_burn_in = max_norm;
  report.bound_holds = max_norm <= cert.eta;
  return report;
}

SimLog synthetic_clamped_run(const DiscreteModel& model,
                             const LqrDesign& design, const RoadMap& map,
                             const VehicleParams& vehicle, double eps1,
                             SyntheticCompensation kind, std::uint64_t seed,
                             double duration, const ErrorState& x0) {
  if (duration * vehicle.vx > map.total_length + 1e-9) {
    throw ConfigError("synthetic run: map too short");
  }
  Rng rng = Rng::stream(seed, "scenario");
  Plant plant;  // nominal stepping only
  plant.params = vehicle;
  plant.cfg = PlantConfig{};
  plant.nominal = model;

  SimLog log;
  log.scenario = map.name + "/synthetic";
  log.map_name = map.name;
  log.ts = vehicle.ts;
  log.vx = vehicle.vx;

  const auto steps =
      static_cast<std::size_t>(std::llround(duration / vehicle.ts));
  log.rows.reserve(steps);
  ErrorState x = x0;
  PlantInternalState pstate{};
  for (std::size_t k = 0; k < steps; ++k) {
    SimRecord rec;
    rec.t = static_cast<double>(k) * vehicle.ts;
    rec.s = vehicle.vx * rec.t;
    rec.kappa = curvature_at(map, rec.s);
    rec.psi_dot_des = vehicle.vx * rec.kappa;
    rec.x = x;
    rec.delta_lqr = lqr_command(design, x);
    rec.delta_c = kind == SyntheticCompensation::ConstantMax
                      ? eps1
                      : rng.uniform(-eps1, eps1);
    rec.delta_f = rec.delta_lqr + rec.delta_c;
    log.rows.push_back(rec);
    auto [next, ps] = plant_step(plant, x, rec.delta_f, rec.psi_dot_des, pstate);
    x = next;
    pstate = ps;
  }
  return log;
}

void save_certificate(const std::string& path, const StabilityCert& cert) {
  std::string out;
  auto put = [&out](const char* key, double v) {
    out += key;
    out += ": ";
    out += g17(v);
    out += '\n';
  };
  auto put_matrix = [&out](const char* key, const Eigen::Matrix4d& m) {
    out += key;
    out += ":";
    for (Eigen::Index r = 0; r < 4; ++r) {
      for (Eigen::Index c = 0; c < 4; ++c) {
        out += ' ';
        out += g17(m(r, c));
      }
    }
    out += '\n';
  };
  put_matrix("phi_cl", cert.phi_cl);
  put_matrix("p", cert.p);
  put_matrix("q0", cert.q0);
  put("alpha", cert.alpha);
  put("beta", cert.beta);
  put("gamma", cert.gamma_c);
  put("delta", cert.delta_c);
  put("c1", cert.c1);
  put("c2", cert.c2);
  put("eps1", cert.eps1);
  put("eps2", cert.eps2);
  put("eta", cert.eta);
  put("lyapunov_residual", cert.lyap_residual);
  put("spectral_radius_cl", cert.spectral_radius_cl);
  write_file(path, out);
}

}  // namespace ndob
