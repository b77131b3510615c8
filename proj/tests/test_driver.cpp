#include <cmath>

#include "doctest.h"
#include "neurodob/driver.hpp"
#include "neurodob/errors.hpp"
#include "neurodob/road.hpp"
#include "neurodob/sim.hpp"
#include "neurodob/vehicle.hpp"

using namespace ndob;

TEST_CASE("steady-state steering matches the force-balance oracle") {
  const VehicleParams p = default_vehicle_params();
  const ContinuousModel cm = build_continuous(p);
  // on a steady arc the rows for e_y_ddot and e_psi_ddot pin down
  // (e_psi_ss, delta_ss) independently of any controller
  for (const double kappa : {0.005, 0.01, 0.02, -0.015}) {
    Eigen::Matrix2d m;
    m << cm.A(1, 2), cm.B(1), cm.A(3, 2), cm.B(3);
    const Eigen::Vector2d rhs(-cm.B2(1) * p.vx * kappa,
                              -cm.B2(3) * p.vx * kappa);
    const Eigen::Vector2d sol = m.partialPivLu().solve(rhs);
    REQUIRE(steady_state_steer(p, kappa) ==
            doctest::Approx(sol[1]).epsilon(1e-12));
  }
}

TEST_CASE("straight road with zero errors commands zero steering") {
  const VehicleParams p = default_vehicle_params();
  const RoadMap map = generate_map("line", {Segment::straight(500)}, 1.0);
  DriverParams params = driver_profile("smooth");
  DriverState state{};
  for (int k = 0; k < 100; ++k) {
    auto [delta, next] =
        driver_command(params, ErrorState{}, map, k * 1.0, p, state);
    state = next;
    REQUIRE(delta == 0.0);
  }
}

TEST_CASE("settled command on a constant arc equals the feedforward") {
  const VehicleParams p = default_vehicle_params();
  const double kappa = 0.01;
  const RoadMap map = generate_map(
      "arc", {Segment::clothoid(50, 0.0, kappa), Segment::arc(800, kappa)},
      1.0);
  DriverParams params = driver_profile("smooth");
  DriverState state{};
  double delta = 0.0;
  // hold position deep in the arc until the smoothing settles
  const double s_hold = 600.0;
  for (int k = 0; k < 5000; ++k) {
    auto [d, next] = driver_command(params, ErrorState{}, map, s_hold, p, state);
    state = next;
    delta = d;
  }
  CHECK(delta == doctest::Approx(steady_state_steer(p, kappa)).epsilon(1e-9));
}

TEST_CASE("preview steers earlier on curve entry") {
  const VehicleParams p = default_vehicle_params();
  const RoadMap map = generate_map(
      "entry", {Segment::straight(300), Segment::clothoid(60, 0.0, 0.02),
                Segment::arc(400, 0.02)},
      1.0);
  auto first_crossing = [&](double preview_time) {
    DriverParams params = driver_profile("smooth");
    params.preview_time = preview_time;
    params.smoothing_tau = 0.0;
    DriverState state{};
    for (int k = 0; k < 5000; ++k) {
      const double s = p.vx * p.ts * k;
      auto [delta, next] =
          driver_command(params, ErrorState{}, map, s, p, state);
      state = next;
      if (std::abs(delta) > 1e-4) return k;
    }
    return -1;
  };
  const int with_preview = first_crossing(1.0);
  const int without = first_crossing(0.0);
  REQUIRE(with_preview > 0);
  REQUIRE(without > 0);
  CHECK(with_preview < without);
}

TEST_CASE("error feedback trims offsets") {
  const VehicleParams p = default_vehicle_params();
  const RoadMap map = generate_map("line", {Segment::straight(500)}, 1.0);
  DriverParams params = driver_profile("aggressive");
  params.smoothing_tau = 0.0;
  const ErrorState offset{0.5, 0.0, 0.0, 0.0};
  auto [delta, state] = driver_command(params, offset, map, 100.0, p, {});
  (void)state;
  CHECK(delta == doctest::Approx(-params.gain_ey * 0.5).epsilon(1e-12));
}

TEST_CASE("profiles exist and are validated") {
  CHECK(driver_profile("smooth").preview_time >
        driver_profile("aggressive").preview_time);
  CHECK_THROWS_AS(driver_profile("reckless"), ConfigError);
  DriverParams bad = driver_profile("smooth");
  bad.preview_time = -1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("driver keeps the vehicle within half a meter on every builtin map") {
  const BuiltinMaps maps = builtin_maps();
  const VehicleParams p = default_vehicle_params();
  const DiscreteModel model = discretize(build_continuous(p), p.ts);
  const LqrDesign lqr = solve_dare(model, default_lqr_weights());

  for (const RoadMap* map : {&maps.map1, &maps.map2, &maps.map3}) {
    for (const char* profile : {"smooth", "aggressive"}) {
      ScenarioConfig cfg;
      cfg.stack = Stack::DriverOnly;
      cfg.duration = 100.0;
      cfg.plant.variant = PlantVariant::Nominal;
      cfg.driver_profile = profile;

      SimAssets assets;
      assets.map = map;
      assets.vehicle = p;
      assets.model = model;
      assets.lqr = lqr;
      assets.driver = driver_profile(profile);

      const SimLog log = run_scenario(cfg, assets);
      REQUIRE(!log.diverged);
      double max_ey = 0.0;
      for (const auto& r : log.rows) {
        max_ey = std::max(max_ey, std::abs(r.x.e_y));
      }
      INFO(map->name, " ", profile);
      REQUIRE(max_ey < 0.5);
    }
  }
}
