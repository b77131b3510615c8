#pragma once

#include <Eigen/Dense>

namespace ndob {

/// Largest eigenvalue modulus of a (generally non-symmetric) real matrix.
double spectral_radius(const Eigen::MatrixXd& m);

inline bool is_schur(const Eigen::MatrixXd& m) {
  return spectral_radius(m) < 1.0;
}

}  // namespace ndob
