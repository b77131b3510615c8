#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "neurodob/nn.hpp"
#include "neurodob/vehicle.hpp"

namespace ndob {

/// Network input in the fixed order
/// [e_y, e_y_dot, e_psi, e_psi_dot, delta_lqr].
struct FeatureVector {
  double e_y = 0.0;
  double e_y_dot = 0.0;
  double e_psi = 0.0;
  double e_psi_dot = 0.0;
  double delta_lqr = 0.0;

  Eigen::Matrix<double, 5, 1> vec() const {
    return {e_y, e_y_dot, e_psi, e_psi_dot, delta_lqr};
  }
  static FeatureVector from(const ErrorState& x, double delta_lqr) {
    return {x.e_y, x.e_y_dot, x.e_psi, x.e_psi_dot, delta_lqr};
  }
};

inline constexpr int kFeatureCount = 5;

/// Hard bound on |delta_c|; makes the compensator's boundedness assumption a
/// machine-checkable guarantee rather than a hypothesis.
struct CompensationLimits {
  double epsilon1 = 0.1;  // rad
};

struct TrainingSample {
  FeatureVector features;
  double delta_c_target = 0.0;  // delta_d - delta_lqr of the same step, rad
};

/// Minimal per-step view consumed by dataset building; matches the training
/// CSV columns (t_s,e_y,e_y_dot,e_psi,e_psi_dot,delta_lqr,delta_d).
struct LogRow {
  double t = 0.0;
  double e_y = 0.0;
  double e_y_dot = 0.0;
  double e_psi = 0.0;
  double e_psi_dot = 0.0;
  double delta_lqr = 0.0;
  double delta_d = 0.0;
};

struct DatasetBuildReport {
  std::size_t total_rows = 0;
  std::size_t dropped_outliers = 0;
};

/// One sample per row, labels delta_d - delta_lqr; rows whose label lies more
/// than 6 sigma from the label mean are dropped (count reported). Throws
/// MisalignedLog (bad timestamps / non-finite columns) and
/// EmptyAfterFiltering.
std::vector<TrainingSample> build_dataset(std::span<const LogRow> rows,
                                          DatasetBuildReport* report = nullptr);

void save_training_csv(const std::string& path, std::span<const LogRow> rows);
std::vector<LogRow> load_training_csv(const std::string& path);

/// delta_c = clamp(destandardize(f(standardize(features))), +-epsilon1).
double compensate(const Mlp& model, const Standardizer& std,
                  const CompensationLimits& limits,
                  const FeatureVector& features);

/// delta_f = delta_lqr + delta_c, clamped to the actuator range.
double final_command(double delta_lqr, double delta_c, double steer_limit);

/// Standardizes features/labels, trains via fit(), returns the Eval-mode
/// model with its standardizer and the training report.
std::tuple<Mlp, Standardizer, TrainReport> train_neurodob(
    std::span<const TrainingSample> samples, const TrainConfig& cfg);

}  // namespace ndob
