#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ndob {

/// Arclength-parameterized curvature profile. The error-state model only
/// consumes psi_dot_des = vx * kappa(s), so no Cartesian path is stored;
/// integrate_path derives one for plotting only.
struct RoadMap {
  std::string name;
  Eigen::VectorXd stations;   // m, strictly increasing from 0
  Eigen::VectorXd curvature;  // 1/m, per station
  double total_length = 0.0;  // m
};

/// |kappa| bound (minimum radius guard) and the allowed curvature slope
/// between adjacent samples.
inline constexpr double kMaxCurvature = 0.1;
inline constexpr double kMaxCurvatureRate = 0.01;  // 1/m per m of station gap

struct Segment {
  enum class Kind { Straight, Arc, Clothoid };
  Kind kind;
  double length;  // m
  double k0;      // 1/m (arc value, or clothoid start)
  double k1;      // 1/m (clothoid end)

  static Segment straight(double length) {
    return {Kind::Straight, length, 0.0, 0.0};
  }
  static Segment arc(double length, double kappa) {
    return {Kind::Arc, length, kappa, kappa};
  }
  static Segment clothoid(double length, double k_start, double k_end) {
    return {Kind::Clothoid, length, k_start, k_end};
  }
};

/// Concatenates segments into a sampled kappa(s) profile (clothoid = linear
/// ramp). Stations are multiples of sample_spacing plus the final endpoint.
RoadMap generate_map(const std::string& name,
                     const std::vector<Segment>& segments,
                     double sample_spacing);

/// Checks the RoadMap invariants; throws CurvatureBoundExceeded / ConfigError.
void validate(const RoadMap& map);

struct BuiltinMaps {
  RoadMap map1;  // training: wide, varied curvature
  RoadMap map2;  // validation: narrow, gentle curvature
  RoadMap map3;  // geometry close to map2
};

/// The three shipped maps. map1's curvature support strictly contains
/// map2's, and map3's curvature distribution is closer to map2's than
/// map1's is (in Jensen-Shannon divergence).
BuiltinMaps builtin_maps();

/// Linear interpolation between bracketing stations; throws OutOfRange.
double curvature_at(const RoadMap& map, double s);

struct CurvatureHistogram {
  Eigen::VectorXd bin_edges;  // bins + 1 entries, uniform
  Eigen::VectorXi counts;     // per bin; sums to station count
  double bin_width = 0.0;
};

CurvatureHistogram curvature_histogram(const RoadMap& map, int bins);

/// JSD (base-2) between the curvature distributions of two maps, computed on
/// shared uniform bins spanning both ranges.
double jensen_shannon_divergence(const RoadMap& a, const RoadMap& b, int bins);

void save_road_csv(const std::string& path, const RoadMap& map);
RoadMap load_road_csv(const std::string& path, const std::string& name = "");

/// Cartesian trace obtained by integrating heading; for plots only, never fed
/// back into the dynamics.
struct XyPath {
  std::vector<double> x, y;
};
XyPath integrate_path(const RoadMap& map);

}  // namespace ndob
