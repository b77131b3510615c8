#include <cmath>

#include "doctest.h"
#include "neurodob/dob.hpp"
#include "neurodob/errors.hpp"
#include "neurodob/lqr.hpp"
#include "neurodob/road.hpp"
#include "neurodob/sim.hpp"
#include "neurodob/vehicle.hpp"

using namespace ndob;

namespace {

struct Loop {
  VehicleParams params = default_vehicle_params();
  DiscreteModel model;
  LqrDesign lqr;
  Loop() {
    model = discretize(build_continuous(params), params.ts);
    lqr = solve_dare(model, default_lqr_weights());
  }

  // closed loop on a straight road (psi_dot_des = 0) with an input bias,
  // optionally compensating with the observer
  struct Result {
    std::vector<double> d_hat;
    std::vector<double> e_y;
  };
  Result run(double bias, double cutoff_hz, bool compensate_loop,
             int steps) const {
    PlantConfig cfg;
    cfg.variant = PlantVariant::Perturbed;  // neutral except the bias
    cfg.input_bias = bias;
    const Plant plant = make_plant(params, cfg);
    const DobDesign design = make_dob(model, cutoff_hz);

    Result result;
    ErrorState x{};
    PlantInternalState pstate{};
    DobState dob{};
    double prev_delta_f = 0.0;
    for (int k = 0; k < steps; ++k) {
      auto [state, d_hat] = dob_update(design, dob, x, prev_delta_f);
      dob = state;
      const double u = lqr_command(lqr, x);
      const double delta_f = compensate_loop ? dob_compensate(u, d_hat) : u;
      result.d_hat.push_back(d_hat);
      result.e_y.push_back(x.e_y);
      auto [next, ps] = plant_step(plant, x, delta_f, 0.0, pstate);
      x = next;
      pstate = ps;
      prev_delta_f = delta_f;
    }
    return result;
  }
};

}  // namespace

TEST_CASE("matched plant with no disturbance estimates zero") {
  const Loop loop;
  const auto result = loop.run(0.0, 2.0, false, 500);
  for (const double d : result.d_hat) REQUIRE(d == 0.0);
}

TEST_CASE("constant input bias is estimated within five time constants") {
  const Loop loop;
  const double bias = 0.02;
  const double cutoff = 2.0;
  const DobDesign design = make_dob(loop.model, cutoff);
  const double tau = dob_time_constant(design);
  const int settle_steps = static_cast<int>(5.0 * tau / loop.params.ts);
  const auto result = loop.run(bias, cutoff, false, settle_steps + 10);
  const double final_d = result.d_hat.back();
  CHECK(std::abs(final_d - bias) / bias < 0.01);
}

TEST_CASE("doubling the cutoff halves the 63 percent rise time") {
  const Loop loop;
  const double bias = 0.02;
  auto rise_steps = [&](double cutoff) {
    const auto result = loop.run(bias, cutoff, false, 4000);
    for (std::size_t k = 0; k < result.d_hat.size(); ++k) {
      if (result.d_hat[k] >= 0.632 * bias) return static_cast<double>(k);
    }
    return -1.0;
  };
  const double slow = rise_steps(0.5);
  const double fast = rise_steps(1.0);
  REQUIRE(slow > 0);
  REQUIRE(fast > 0);
  CHECK(slow / fast == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("dob_compensate arithmetic") {
  CHECK(dob_compensate(0.1, 0.0) == 0.1);
  CHECK(dob_compensate(0.1, 0.03) == doctest::Approx(0.07).epsilon(1e-15));
}

TEST_CASE("compensation removes a constant bias from the loop") {
  const Loop loop;
  const double bias = 0.02;
  const int steps = 6000;
  const auto plain = loop.run(bias, 2.0, false, steps);
  const auto compensated = loop.run(bias, 2.0, true, steps);
  const double ey_plain = std::abs(plain.e_y.back());
  const double ey_comp = std::abs(compensated.e_y.back());
  CHECK(ey_plain >= 10.0 * ey_comp);
}

TEST_CASE("near-Nyquist cutoff tracks the residual within one step") {
  const Loop loop;
  const double bias = 0.02;
  // cutoff close to the guard: filter constant a = 1 - exp(-2 pi f ts) -> ~1
  const auto result = loop.run(bias, 49.0, false, 50);
  // after two updates the estimate is within 10% of the bias
  CHECK(std::abs(result.d_hat[3] - bias) / bias < 0.1);
}

TEST_CASE("cutoff bounds are enforced") {
  const Loop loop;
  CHECK_THROWS_AS(make_dob(loop.model, 0.0), ConfigError);
  CHECK_THROWS_AS(make_dob(loop.model, 50.0), ConfigError);  // Nyquist = 50
  CHECK_NOTHROW(make_dob(loop.model, 49.9));
}

TEST_CASE("dob stack in the scenario runner compensates bias on a curve-free map") {
  const Loop loop;
  const RoadMap straight = generate_map("line", {Segment::straight(1500)}, 1.0);

  ScenarioConfig cfg;
  cfg.duration = 60.0;
  cfg.plant.variant = PlantVariant::Perturbed;
  cfg.plant.input_bias = 0.02;
  cfg.x0 = ErrorState{0.5, 0.0, 0.0, 0.0};

  SimAssets assets;
  assets.map = &straight;
  assets.vehicle = loop.params;
  assets.model = loop.model;
  assets.lqr = loop.lqr;
  const DobDesign dob = make_dob(loop.model, 2.0);
  assets.dob = &dob;

  cfg.stack = Stack::Lqr;
  const SimLog lqr_log = run_scenario(cfg, assets);
  cfg.stack = Stack::LqrDob;
  const SimLog dob_log = run_scenario(cfg, assets);

  REQUIRE(!lqr_log.diverged);
  REQUIRE(!dob_log.diverged);
  const double ey_lqr = std::abs(lqr_log.rows.back().x.e_y);
  const double ey_dob = std::abs(dob_log.rows.back().x.e_y);
  CHECK(ey_lqr >= 10.0 * ey_dob);
  CHECK(std::abs(dob_log.rows.back().d_hat - 0.02) < 0.002);
}
