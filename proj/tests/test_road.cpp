#include <cstdio>

#include "doctest.h"
#include "neurodob/errors.hpp"
#include "neurodob/road.hpp"
#include "neurodob/text.hpp"

using namespace ndob;

TEST_CASE("straight segment sampling") {
  const RoadMap map = generate_map("s", {Segment::straight(100)}, 1.0);
  CHECK(map.stations.size() == 101);
  CHECK(map.curvature.cwiseAbs().maxCoeff() == 0.0);
  CHECK(map.total_length == 100.0);
}

TEST_CASE("constant arc keeps its curvature") {
  const RoadMap map = generate_map("a", {Segment::arc(50, 0.02)}, 1.0);
  for (Eigen::Index i = 0; i < map.curvature.size(); ++i) {
    REQUIRE(map.curvature[i] == 0.02);
  }
}

TEST_CASE("clothoid is a linear ramp") {
  const RoadMap map =
      generate_map("c", {Segment::clothoid(10, 0.0, 0.01)}, 1.0);
  CHECK(map.curvature[5] == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(map.curvature[0] == 0.0);
  CHECK(map.curvature[10] == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("generation is deterministic") {
  const std::vector<Segment> spec = {Segment::straight(20),
                                     Segment::clothoid(30, 0.0, 0.02),
                                     Segment::arc(40, 0.02)};
  const RoadMap a = generate_map("m", spec, 0.5);
  const RoadMap b = generate_map("m", spec, 0.5);
  CHECK(a.stations == b.stations);
  CHECK(a.curvature == b.curvature);
}

TEST_CASE("curvature bounds and continuity are enforced") {
  CHECK_THROWS_AS(generate_map("bad", {Segment::arc(10, 0.2)}, 1.0),
                  CurvatureBoundExceeded);
  // straight into a sharp arc without a clothoid bridge
  CHECK_THROWS_AS(
      generate_map("bad", {Segment::straight(10), Segment::arc(10, 0.05)},
                   1.0),
      CurvatureBoundExceeded);
  CHECK_THROWS_AS(generate_map("bad", {Segment::straight(-5)}, 1.0),
                  ConfigError);
}

TEST_CASE("curvature lookup") {
  const RoadMap map =
      generate_map("c", {Segment::clothoid(10, 0.0, 0.01)}, 1.0);
  SUBCASE("knot points are exact") {
    for (Eigen::Index i = 0; i < map.stations.size(); ++i) {
      REQUIRE(curvature_at(map, map.stations[i]) == map.curvature[i]);
    }
  }
  SUBCASE("midpoint interpolation") {
    RoadMap two;
    two.name = "two";
    two.stations = Eigen::Vector2d(0.0, 10.0);
    two.curvature = Eigen::Vector2d(0.01, 0.03);
    two.total_length = 10.0;
    validate(two);
    CHECK(curvature_at(two, 5.0) == doctest::Approx(0.02).epsilon(1e-15));
  }
  SUBCASE("straight road reads zero everywhere") {
    const RoadMap s = generate_map("s", {Segment::straight(50)}, 1.0);
    CHECK(curvature_at(s, 17.3) == 0.0);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(curvature_at(map, -0.1), OutOfRange);
    CHECK_THROWS_AS(curvature_at(map, 10.1), OutOfRange);
  }
}

TEST_CASE("histogram conserves mass") {
  SUBCASE("straight road concentrates in the zero bin") {
    const RoadMap s = generate_map("s", {Segment::straight(100)}, 1.0);
    const CurvatureHistogram h = curvature_histogram(s, 10);
    CHECK(h.counts.sum() == s.stations.size());
    int nonzero_bins = 0;
    int zero_bin = -1;
    for (int i = 0; i < 10; ++i) {
      if (h.counts[i] > 0) {
        ++nonzero_bins;
        zero_bin = i;
      }
    }
    CHECK(nonzero_bins == 1);
    CHECK(h.bin_edges[zero_bin] <= 0.0);
    CHECK(h.bin_edges[zero_bin + 1] >= 0.0);
  }

  SUBCASE("symmetric curvature gives symmetric counts") {
    RoadMap m;
    m.name = "sym";
    const int n = 40;  // alternating +-0.01 at 10 m spacing
    m.stations.resize(n);
    m.curvature.resize(n);
    for (int i = 0; i < n; ++i) {
      m.stations[i] = 10.0 * i;
      m.curvature[i] = (i % 2 == 0) ? 0.01 : -0.01;
    }
    m.total_length = m.stations[n - 1];
    validate(m);
    const CurvatureHistogram h = curvature_histogram(m, 8);
    CHECK(h.counts.sum() == n);
    for (int i = 0; i < 8; ++i) {
      REQUIRE(h.counts[i] == h.counts[7 - i]);
    }
  }

  SUBCASE("bin count precondition") {
    const RoadMap s = generate_map("s", {Segment::straight(10)}, 1.0);
    CHECK_THROWS_AS(curvature_histogram(s, 1), ConfigError);
  }
}

TEST_CASE("builtin maps satisfy the shipped roles") {
  const BuiltinMaps maps = builtin_maps();
  validate(maps.map1);
  validate(maps.map2);
  validate(maps.map3);

  // long enough for a 100 s drive at 50 km/h
  const double needed = 100.0 * 50.0 / 3.6;
  CHECK(maps.map1.total_length >= needed);
  CHECK(maps.map2.total_length >= needed);
  CHECK(maps.map3.total_length >= needed);

  // map1's curvature support strictly contains map2's
  CHECK(maps.map1.curvature.minCoeff() < maps.map2.curvature.minCoeff());
  CHECK(maps.map1.curvature.maxCoeff() > maps.map2.curvature.maxCoeff());

  // map3 is distribution-wise closer to map2 than map1 is
  const double jsd_32 = jensen_shannon_divergence(maps.map3, maps.map2, 40);
  const double jsd_12 = jensen_shannon_divergence(maps.map1, maps.map2, 40);
  CHECK(jsd_32 < jsd_12);

  // histogram mass is conserved on map1
  const CurvatureHistogram h = curvature_histogram(maps.map1, 40);
  CHECK(h.counts.sum() == maps.map1.stations.size());
}

TEST_CASE("road CSV round trip is exact") {
  const BuiltinMaps maps = builtin_maps();
  const std::string path = "road_roundtrip_test.csv";
  save_road_csv(path, maps.map2);
  const RoadMap loaded = load_road_csv(path, maps.map2.name);
  REQUIRE(loaded.stations.size() == maps.map2.stations.size());
  CHECK(loaded.stations == maps.map2.stations);
  CHECK(loaded.curvature == maps.map2.curvature);
  std::remove(path.c_str());
}

TEST_CASE("integrated path has plausible geometry") {
  // full circle: constant curvature over 2 pi R meters returns to start
  const double r = 50.0;
  const RoadMap circle = generate_map(
      "circle", {Segment::arc(2.0 * M_PI * r, 1.0 / r)}, 0.5);
  const XyPath path = integrate_path(circle);
  CHECK(std::abs(path.x.back() - path.x.front()) < 0.1);
  CHECK(std::abs(path.y.back() - path.y.front()) < 0.1);
}
