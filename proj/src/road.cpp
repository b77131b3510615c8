#include "neurodob/road.hpp"

#include <algorithm>
#include <cmath>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

namespace {

double segment_kappa(const Segment& seg, double local_s) {
  switch (seg.kind) {
    case Segment::Kind::Straight:
      return 0.0;
    case Segment::Kind::Arc:
      return seg.k0;
    case Segment::Kind::Clothoid:
      return seg.k0 + (seg.k1 - seg.k0) * (local_s / seg.length);
  }
  return 0.0;
}

}  // namespace

RoadMap generate_map(const std::string& name,
                     const std::vector<Segment>& segments,
                     double sample_spacing) {
  if (segments.empty()) throw ConfigError("generate_map: no segments");
  if (!(sample_spacing > 0.0)) {
    throw ConfigError("generate_map: sample_spacing must be > 0");
  }
  std::vector<double> bounds{0.0};
  for (const auto& seg : segments) {
    if (!(seg.length > 0.0)) {
      throw ConfigError("generate_map: segment lengths must be > 0");
    }
    if (std::abs(seg.k0) > kMaxCurvature || std::abs(seg.k1) > kMaxCurvature) {
      throw CurvatureBoundExceeded("segment curvature exceeds bound");
    }
    bounds.push_back(bounds.back() + seg.length);
  }
  const double total = bounds.back();

  std::vector<double> stations;
  const auto n_full = static_cast<std::size_t>(total / sample_spacing + 1e-9);
  stations.reserve(n_full + 2);
  for (std::size_t i = 0; i <= n_full; ++i) {
    stations.push_back(static_cast<double>(i) * sample_spacing);
  }
  if (stations.back() < total - 1e-9) stations.push_back(total);

  RoadMap map;
  map.name = name;
  map.total_length = total;
  map.stations.resize(static_cast<Eigen::Index>(stations.size()));
  map.curvature.resize(static_cast<Eigen::Index>(stations.size()));
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double s = stations[i];
    // boundary stations take the later segment's start value
    auto it = std::upper_bound(bounds.begin(), bounds.end(), s);
    std::size_t idx = static_cast<std::size_t>(it - bounds.begin());
    idx = (idx == 0) ? 0 : idx - 1;
    if (idx >= segments.size()) idx = segments.size() - 1;
    map.stations[static_cast<Eigen::Index>(i)] = s;
    map.curvature[static_cast<Eigen::Index>(i)] =
        segment_kappa(segments[idx], s - bounds[idx]);
  }
  validate(map);
  return map;
}

void validate(const RoadMap& map) {
  const auto n = map.stations.size();
  if (n < 2) throw ConfigError("road map needs at least two stations");
  if (map.curvature.size() != n) {
    throw ConfigError("stations/curvature size mismatch");
  }
  if (map.stations[0] != 0.0) throw ConfigError("stations must start at 0");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(map.curvature[i]) > kMaxCurvature) {
      throw CurvatureBoundExceeded("curvature magnitude exceeds " +
                                   g17(kMaxCurvature));
    }
    if (i > 0) {
      const double gap = map.stations[i] - map.stations[i - 1];
      if (!(gap > 0.0)) throw ConfigError("stations must strictly increase");
      if (std::abs(map.curvature[i] - map.curvature[i - 1]) >=
          kMaxCurvatureRate * gap) {
        throw CurvatureBoundExceeded("curvature discontinuity at station " +
                                     g17(map.stations[i]));
      }
    }
  }
  if (map.total_length != map.stations[n - 1]) {
    throw ConfigError("total_length must equal the last station");
  }
}

double curvature_at(const RoadMap& map, double s) {
  if (s < 0.0 || s > map.total_length) {
    throw OutOfRange("station " + g17(s) + " outside [0, " +
                     g17(map.total_length) + "]");
  }
  const auto n = map.stations.size();
  const double* begin = map.stations.data();
  const double* it = std::upper_bound(begin, begin + n, s);
  Eigen::Index hi = static_cast<Eigen::Index>(it - begin);
  if (hi == 0) return map.curvature[0];
  if (hi >= n) return map.curvature[n - 1];
  const Eigen::Index lo = hi - 1;
  const double t =
      (s - map.stations[lo]) / (map.stations[hi] - map.stations[lo]);
  return map.curvature[lo] + t * (map.curvature[hi] - map.curvature[lo]);
}

namespace {

void histogram_range(const RoadMap& map, double& lo, double& hi) {
  lo = map.curvature.minCoeff();
  hi = map.curvature.maxCoeff();
  if (hi - lo < 1e-12) {
    lo -= 1e-6;
    hi += 1e-6;
  }
}

Eigen::VectorXi count_into(const RoadMap& map, double lo, double width,
                           int bins) {
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(bins);
  for (Eigen::Index i = 0; i < map.curvature.size(); ++i) {
    auto bin = static_cast<int>((map.curvature[i] - lo) / width);
    bin = std::clamp(bin, 0, bins - 1);
    counts[bin] += 1;
  }
  return counts;
}

}  // namespace

CurvatureHistogram curvature_histogram(const RoadMap& map, int bins) {
  if (bins < 2) throw ConfigError("histogram needs at least 2 bins");
  double lo = 0.0, hi = 0.0;
  histogram_range(map, lo, hi);
  CurvatureHistogram h;
  h.bin_width = (hi - lo) / bins;
  h.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[i] = lo + i * h.bin_width;
  h.counts = count_into(map, lo, h.bin_width, bins);
  return h;
}

double jensen_shannon_divergence(const RoadMap& a, const RoadMap& b,
                                 int bins) {
  if (bins < 2) throw ConfigError("histogram needs at least 2 bins");
  double lo_a = 0.0, hi_a = 0.0, lo_b = 0.0, hi_b = 0.0;
  histogram_range(a, lo_a, hi_a);
  histogram_range(b, lo_b, hi_b);
  const double lo = std::min(lo_a, lo_b);
  const double hi = std::max(hi_a, hi_b);
  const double width = (hi - lo) / bins;
  const Eigen::VectorXi ca = count_into(a, lo, width, bins);
  const Eigen::VectorXi cb = count_into(b, lo, width, bins);
  const Eigen::VectorXd p = ca.cast<double>() / ca.sum();
  const Eigen::VectorXd q = cb.cast<double>() / cb.sum();
  double jsd = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return jsd;
}

BuiltinMaps builtin_maps() {
  using S = Segment;
  // Lengths sized for a 100 s drive at 50 km/h (>= 1389 m).
  const std::vector<S> spec1 = {
      S::straight(60),
      S::clothoid(25, 0.0, 0.016),    S::arc(90, 0.016),
      S::clothoid(25, 0.016, 0.0),    S::straight(40),
      S::clothoid(25, 0.0, -0.023),   S::arc(80, -0.023),
      S::clothoid(25, -0.023, 0.0),   S::straight(40),
      S::clothoid(30, 0.0, 0.030),    S::arc(70, 0.030),
      S::clothoid(30, 0.030, 0.009),  S::arc(60, 0.009),
      S::clothoid(20, 0.009, 0.0),    S::straight(50),
      S::clothoid(25, 0.0, -0.009),   S::arc(70, -0.009),
      S::clothoid(30, -0.009, -0.030), S::arc(60, -0.030),
      S::clothoid(30, -0.030, 0.0),   S::straight(40),
      S::clothoid(25, 0.0, 0.023),    S::arc(80, 0.023),
      S::clothoid(25, 0.023, 0.0),    S::straight(30),
      S::clothoid(25, 0.0, -0.016),   S::arc(90, -0.016),
      S::clothoid(25, -0.016, 0.0),   S::straight(45),
      S::clothoid(25, 0.0, 0.013),    S::arc(60, 0.013),
      S::clothoid(25, 0.013, 0.0),    S::straight(30),
  };
  const std::vector<S> spec2 = {
      S::straight(120),
      S::clothoid(30, 0.0, 0.011),  S::arc(150, 0.011),
      S::clothoid(30, 0.011, 0.0),  S::straight(100),
      S::clothoid(25, 0.0, -0.005), S::arc(120, -0.005),
      S::clothoid(25, -0.005, 0.0), S::straight(90),
      S::clothoid(30, 0.0, -0.011), S::arc(140, -0.011),
      S::clothoid(30, -0.011, 0.0), S::straight(100),
      S::clothoid(25, 0.0, 0.005),  S::arc(130, 0.005),
      S::clothoid(25, 0.005, 0.0),  S::straight(220),
  };
  const std::vector<S> spec3 = {
      S::straight(100),
      S::clothoid(28, 0.0, -0.0115), S::arc(145, -0.0115),
      S::clothoid(28, -0.0115, 0.0), S::straight(110),
      S::clothoid(25, 0.0, 0.0055),  S::arc(125, 0.0055),
      S::clothoid(25, 0.0055, 0.0),  S::straight(95),
      S::clothoid(28, 0.0, 0.0115),  S::arc(135, 0.0115),
      S::clothoid(28, 0.0115, 0.0),  S::straight(105),
      S::clothoid(25, 0.0, -0.0055), S::arc(125, -0.0055),
      S::clothoid(25, -0.0055, 0.0), S::straight(240),
  };
  BuiltinMaps maps;
  maps.map1 = generate_map("map1", spec1, 1.0);
  maps.map2 = generate_map("map2", spec2, 1.0);
  maps.map3 = generate_map("map3", spec3, 1.0);
  return maps;
}

void save_road_csv(const std::string& path, const RoadMap& map) {
  std::string out = "station_m,curvature_inv_m\n";
  for (Eigen::Index i = 0; i < map.stations.size(); ++i) {
    out += g17(map.stations[i]);
    out += ',';
    out += g17(map.curvature[i]);
    out += '\n';
  }
  write_file(path, out);
}

RoadMap load_road_csv(const std::string& path, const std::string& name) {
  const std::string text = read_file(path);
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || trim(lines[0]) != "station_m,curvature_inv_m") {
    throw IoFailure("bad road CSV header in " + path);
  }
  RoadMap map;
  map.name = name.empty() ? path : name;
  const auto n = static_cast<Eigen::Index>(lines.size()) - 1;
  map.stations.resize(n);
  map.curvature.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto cols = split(lines[static_cast<std::size_t>(i) + 1], ',');
    if (cols.size() != 2) {
      throw IoFailure("bad road CSV row " + std::to_string(i + 2));
    }
    map.stations[i] = parse_double(trim(cols[0]));
    map.curvature[i] = parse_double(trim(cols[1]));
  }
  map.total_length = n > 0 ? map.stations[n - 1] : 0.0;
  validate(map);
  return map;
}

XyPath integrate_path(const RoadMap& map) {
  XyPath path;
  const auto n = map.stations.size();
  path.x.resize(static_cast<std::size_t>(n));
  path.y.resize(static_cast<std::size_t>(n));
  double x = 0.0, y = 0.0, heading = 0.0;
  path.x[0] = 0.0;
  path.y[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double ds = map.stations[i] - map.stations[i - 1];
    const double mid_kappa = 0.5 * (map.curvature[i] + map.curvature[i - 1]);
    const double half = heading + 0.5 * mid_kappa * ds;
    x += ds * std::cos(half);
    y += ds * std::sin(half);
    heading += mid_kappa * ds;
    path.x[static_cast<std::size_t>(i)] = x;
    path.y[static_cast<std::size_t>(i)] = y;
  }
  return path;
}

}  // namespace ndob
