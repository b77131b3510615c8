#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "neurodob/errors.hpp"
#include "neurodob/sim.hpp"
#include "neurodob/text.hpp"

using namespace ndob;

namespace {

struct Rig {
  VehicleParams params = default_vehicle_params();
  DiscreteModel model;
  LqrDesign lqr;
  RoadMap straight = generate_map("line", {Segment::straight(1500)}, 1.0);

  Rig() {
    model = discretize(build_continuous(params), params.ts);
    lqr = solve_dare(model, default_lqr_weights());
  }

  SimAssets assets(const RoadMap& map) const {
    SimAssets a;
    a.map = &map;
    a.vehicle = params;
    a.model = model;
    a.lqr = lqr;
    a.driver = driver_profile("smooth");
    return a;
  }
};

Mlp zero_net() {
  Rng rng(0);
  Mlp m = make_mlp({5, 8, 1}, 0.0, rng);
  for (auto& w : m.w) w.setZero();
  for (auto& b : m.b) b.setZero();
  return m;
}

std::string log_bytes(const SimLog& log) {
  const std::string path = "sim_bytes_test.csv";
  save_log_csv(path, log);
  std::string text = read_file(path);
  std::remove(path.c_str());
  return text;
}

}  // namespace

TEST_CASE("straight road at equilibrium stays at zero for every stack") {
  const Rig rig;
  ScenarioConfig cfg;
  cfg.duration = 20.0;

  const Mlp net = zero_net();
  const Standardizer std_ = Standardizer::from_moments(
      Eigen::VectorXd::Zero(5), Eigen::VectorXd::Ones(5), 0.0, 1.0);
  const DobDesign dob = make_dob(rig.model, 2.0);

  for (const Stack stack : {Stack::DriverOnly, Stack::Lqr, Stack::LqrDob,
                            Stack::LqrNeurodob}) {
    SimAssets assets = rig.assets(rig.straight);
    assets.dob = &dob;
    assets.mlp = &net;
    assets.standardizer = &std_;
    cfg.stack = stack;
    const SimLog log = run_scenario(cfg, assets);
    REQUIRE(!log.diverged);
    for (const auto& r : log.rows) {
      REQUIRE(r.x.e_y == 0.0);
      REQUIRE(r.delta_f == 0.0);
      REQUIRE(r.delta_lqr == 0.0);
    }
  }
}

TEST_CASE("lqr stack contracts from a nonzero initial state") {
  const Rig rig;
  ScenarioConfig cfg;
  cfg.stack = Stack::Lqr;
  cfg.duration = 25.0;  // 2500 steps
  cfg.x0 = ErrorState{0.8, 0.0, -0.1, 0.0};

  const SimLog log = run_scenario(cfg, rig.assets(rig.straight));
  REQUIRE(!log.diverged);
  const double initial = log.rows.front().x.vec().norm();
  const double at2000 = log.rows[2000].x.vec().norm();
  CHECK(at2000 <= 1e-6 * initial);

  // norm envelope decays: every 500-step marker is below the previous
  double prev = initial;
  for (std::size_t k = 500; k < log.rows.size(); k += 500) {
    const double now = log.rows[k].x.vec().norm();
    REQUIRE(now < prev);
    prev = now;
  }
}

TEST_CASE("zero-output compensator reproduces the lqr log bit for bit") {
  const Rig rig;
  const RoadMap map = builtin_maps().map2;

  ScenarioConfig cfg;
  cfg.duration = 60.0;
  cfg.x0 = ErrorState{0.2, 0.0, 0.01, 0.0};

  const Mlp net = zero_net();
  const Standardizer std_ = Standardizer::from_moments(
      Eigen::VectorXd::Zero(5), Eigen::VectorXd::Ones(5), 0.0, 1.0);

  SimAssets assets = rig.assets(map);
  assets.mlp = &net;
  assets.standardizer = &std_;

  cfg.stack = Stack::Lqr;
  const SimLog lqr_log = run_scenario(cfg, assets);
  cfg.stack = Stack::LqrNeurodob;
  const SimLog ndob_log = run_scenario(cfg, assets);

  REQUIRE(lqr_log.rows.size() == ndob_log.rows.size());
  for (std::size_t k = 0; k < lqr_log.rows.size(); ++k) {
    REQUIRE(lqr_log.rows[k].x.vec() == ndob_log.rows[k].x.vec());
    REQUIRE(lqr_log.rows[k].delta_f == ndob_log.rows[k].delta_f);
    REQUIRE(ndob_log.rows[k].delta_c == 0.0);
  }
}

TEST_CASE("command consistency in the compensated stack") {
  const Rig rig;
  const RoadMap map = builtin_maps().map1;

  Rng prng(17);
  Mlp net = make_mlp({5, 16, 1}, 0.0, prng);  // arbitrary small compensator
  const Standardizer std_ = Standardizer::from_moments(
      Eigen::VectorXd::Zero(5), Eigen::VectorXd::Ones(5), 0.0, 0.05);

  ScenarioConfig cfg;
  cfg.stack = Stack::LqrNeurodob;
  cfg.duration = 60.0;

  SimAssets assets = rig.assets(map);
  assets.mlp = &net;
  assets.standardizer = &std_;
  const SimLog log = run_scenario(cfg, assets);
  REQUIRE(!log.diverged);
  for (const auto& r : log.rows) {
    REQUIRE(std::abs(r.delta_c) <= cfg.limits.epsilon1);
    if (!r.steer_clamped) {
      REQUIRE(r.delta_f == r.delta_lqr + r.delta_c);
    }
  }
}

TEST_CASE("collection logs the driver loop with a shadow baseline") {
  const Rig rig;
  const RoadMap map = builtin_maps().map1;

  ScenarioConfig cfg;
  cfg.duration = 100.0;
  cfg.plant.variant = PlantVariant::Perturbed;
  cfg.plant.stiffness_scale = 0.85;

  const SimLog log = collect_training_run(cfg, rig.assets(map));
  REQUIRE(!log.diverged);

  SUBCASE("exactly duration/ts records") {
    CHECK(log.rows.size() == 10000);
  }

  SUBCASE("driver command drives the plant: open-loop replay matches") {
    const Plant plant = make_plant(rig.params, cfg.plant);
    ErrorState x = log.rows.front().x;
    PlantInternalState pstate{};
    for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
      auto [next, ps] =
          plant_step(plant, x, log.rows[k].delta_d, log.rows[k].psi_dot_des,
                     pstate);
      x = next;
      pstate = ps;
      REQUIRE((x.vec() - log.rows[k + 1].x.vec()).cwiseAbs().maxCoeff() <=
              1e-12);
    }
  }

  SUBCASE("labels have nonzero variance on the training map") {
    double mean = 0.0, var = 0.0;
    for (const auto& r : log.rows) mean += r.delta_d - r.delta_lqr;
    mean /= static_cast<double>(log.rows.size());
    for (const auto& r : log.rows) {
      const double d = r.delta_d - r.delta_lqr - mean;
      var += d * d;
    }
    var /= static_cast<double>(log.rows.size());
    CHECK(var > 1e-8);
  }
}

TEST_CASE("same configuration and seed gives byte-identical logs") {
  const Rig rig;
  const RoadMap map = builtin_maps().map3;
  ScenarioConfig cfg;
  cfg.stack = Stack::DriverOnly;
  cfg.duration = 50.0;
  cfg.plant.variant = PlantVariant::Perturbed;
  cfg.seed = 7;

  const SimLog a = run_scenario(cfg, rig.assets(map));
  const SimLog b = run_scenario(cfg, rig.assets(map));
  CHECK(log_bytes(a) == log_bytes(b));
}

TEST_CASE("input-channel compensation cancels an injected disturbance") {
  const Rig rig;
  const RoadMap map = builtin_maps().map1;
  const Plant plant = make_plant(rig.params, PlantConfig{});

  ErrorState x_ref{0.1, 0.0, 0.02, 0.0};
  ErrorState x_comp = x_ref;
  PlantInternalState ps_ref{}, ps_comp{};

  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double s = rig.params.vx * rig.params.ts * k;
    const double psi_dot_des = rig.params.vx * curvature_at(map, s);
    const double d = 0.05 * std::sin(0.013 * k);  // injected disturbance

    const double u_ref = lqr_command(rig.lqr, x_ref);
    auto [next_ref, a] = plant_step(plant, x_ref, u_ref, psi_dot_des, ps_ref);
    x_ref = next_ref;
    ps_ref = a;

    const double u_comp = lqr_command(rig.lqr, x_comp) + d + (-d);
    auto [next_comp, b] =
        plant_step(plant, x_comp, u_comp, psi_dot_des, ps_comp);
    x_comp = next_comp;
    ps_comp = b;

    worst = std::max(worst,
                     (x_ref.vec() - x_comp.vec()).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("divergence aborts with a flagged partial log") {
  const Rig rig;
  ScenarioConfig cfg;
  cfg.stack = Stack::Lqr;
  cfg.duration = 50.0;
  cfg.x0 = ErrorState{9.0, 200.0, 0.0, 0.0};  // blows past the 10 m guard

  const SimLog log = run_scenario(cfg, rig.assets(rig.straight));
  CHECK(log.diverged);
  CHECK(log.rows.size() < 5000);
  CHECK(!log.rows.empty());
}

TEST_CASE("log CSV round trips and the sidecar reports metadata") {
  const Rig rig;
  ScenarioConfig cfg;
  cfg.stack = Stack::Lqr;
  cfg.duration = 5.0;
  cfg.x0 = ErrorState{0.3, 0.0, 0.0, 0.0};
  const SimLog log = run_scenario(cfg, rig.assets(rig.straight));

  const std::string path = "sim_roundtrip_test.csv";
  save_log_csv(path, log);
  const SimLog loaded = load_log_csv(path);
  REQUIRE(loaded.rows.size() == log.rows.size());
  for (std::size_t k = 0; k < log.rows.size(); ++k) {
    REQUIRE(loaded.rows[k].x.vec() == log.rows[k].x.vec());
    REQUIRE(loaded.rows[k].delta_f == log.rows[k].delta_f);
  }
  CHECK(loaded.ts == log.ts);

  const std::string meta_path = "sim_roundtrip_test.meta";
  save_log_meta(meta_path, log);
  const std::string meta = read_file(meta_path);
  CHECK(meta.find("scenario: line/lqr") != std::string::npos);
  CHECK(meta.find("rows: 500") != std::string::npos);
  std::remove(path.c_str());
  std::remove(meta_path.c_str());
}

TEST_CASE("scenario validation") {
  const Rig rig;
  ScenarioConfig cfg;
  cfg.stack = Stack::LqrNeurodob;  // no model provided
  SimAssets assets = rig.assets(rig.straight);
  CHECK_THROWS_AS(run_scenario(cfg, assets), ConfigError);

  cfg.stack = Stack::Lqr;
  cfg.duration = 1000.0;  // longer than the map
  CHECK_THROWS_AS(run_scenario(cfg, assets), ConfigError);
}
