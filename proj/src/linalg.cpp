#include "neurodob/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace ndob {

double spectral_radius(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ndob
