#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "neurodob/errors.hpp"
#include "neurodob/neurodob.hpp"
#include "neurodob/rng.hpp"
#include "neurodob/text.hpp"

using namespace ndob;

namespace {

std::vector<LogRow> synthetic_rows(int n, std::uint64_t seed,
                                   double (*label_rule)(const LogRow&)) {
  Rng rng(seed);
  std::vector<LogRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LogRow r;
    r.t = i * 0.01;
    r.e_y = 0.2 * rng.normal();
    r.e_y_dot = 0.1 * rng.normal();
    r.e_psi = 0.05 * rng.normal();
    r.e_psi_dot = 0.05 * rng.normal();
    r.delta_lqr = 0.05 * rng.normal();
    r.delta_d = r.delta_lqr + label_rule(r);
    rows.push_back(r);
  }
  return rows;
}

Mlp zero_model() {
  Rng rng(0);
  Mlp m = make_mlp({5, 8, 1}, 0.0, rng);
  for (auto& w : m.w) w.setZero();
  for (auto& b : m.b) b.setZero();
  return m;
}

Standardizer unit_standardizer(double out_mean = 0.0) {
  return Standardizer::from_moments(Eigen::VectorXd::Zero(5),
                                    Eigen::VectorXd::Ones(5), out_mean, 1.0);
}

}  // namespace

TEST_CASE("labels are the driver/baseline deviation") {
  SUBCASE("identical commands give all-zero labels") {
    const auto rows =
        synthetic_rows(100, 1, [](const LogRow&) { return 0.0; });
    const auto samples = build_dataset(rows);
    for (const auto& s : samples) REQUIRE(s.delta_c_target == 0.0);
  }

  SUBCASE("single row arithmetic") {
    LogRow r;
    r.t = 0.0;
    r.delta_d = 0.05;
    r.delta_lqr = 0.02;
    const auto samples = build_dataset(std::vector<LogRow>{r});
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].delta_c_target == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(samples[0].features.delta_lqr == 0.02);
  }

  SUBCASE("label identity reconstructs delta_d for retained samples") {
    const auto rows = synthetic_rows(500, 2, [](const LogRow& r) {
      return 0.4 * r.e_y - 0.1 * r.e_psi;
    });
    const auto samples = build_dataset(rows);
    REQUIRE(samples.size() == rows.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      REQUIRE(samples[i].delta_c_target + rows[i].delta_lqr ==
              doctest::Approx(rows[i].delta_d).epsilon(1e-15));
    }
  }
}

TEST_CASE("outlier rows are dropped and counted") {
  auto rows = synthetic_rows(1000, 3, [](const LogRow& r) {
    return 0.3 * r.e_y;
  });
  // inject a spike far beyond 6 sigma of the label distribution
  rows[500].delta_d = rows[500].delta_lqr + 100.0;
  DatasetBuildReport report;
  const auto samples = build_dataset(rows, &report);
  CHECK(report.total_rows == 1000);
  CHECK(report.dropped_outliers == 1);
  CHECK(samples.size() == 999);
}

TEST_CASE("malformed logs are rejected") {
  auto rows = synthetic_rows(10, 4, [](const LogRow&) { return 0.0; });
  SUBCASE("non-increasing timestamps") {
    rows[5].t = rows[4].t;
    CHECK_THROWS_AS(build_dataset(rows), MisalignedLog);
  }
  SUBCASE("non-finite column") {
    rows[3].e_psi = std::nan("");
    CHECK_THROWS_AS(build_dataset(rows), MisalignedLog);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(build_dataset(std::vector<LogRow>{}), EmptyAfterFiltering);
  }
}

TEST_CASE("training CSV round trip") {
  const auto rows = synthetic_rows(50, 5, [](const LogRow& r) {
    return 0.2 * r.e_y;
  });
  const std::string path = "training_roundtrip_test.csv";
  save_training_csv(path, rows);
  const auto loaded = load_training_csv(path);
  REQUIRE(loaded.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(loaded[i].t == rows[i].t);
    REQUIRE(loaded[i].e_y == rows[i].e_y);
    REQUIRE(loaded[i].delta_d == rows[i].delta_d);
  }
  std::remove(path.c_str());
}

TEST_CASE("compensation clamp and defaults") {
  const CompensationLimits limits{0.1};

  SUBCASE("zero-weight model emits the label mean") {
    const Mlp m = zero_model();
    const Standardizer s = unit_standardizer(0.04);
    const FeatureVector f{0.3, -0.1, 0.02, 0.0, 0.01};
    CHECK(compensate(m, s, limits, f) == 0.04);
    const Standardizer centered = unit_standardizer(0.0);
    CHECK(compensate(m, centered, limits, f) == 0.0);
  }

  SUBCASE("raw output far past the clamp saturates at epsilon1") {
    Mlp m = zero_model();
    m.b.back()[0] = 10.0;  // raw network output 10 rad
    const Standardizer s = unit_standardizer();
    CHECK(compensate(m, s, limits, FeatureVector{}) == 0.1);
    m.b.back()[0] = -10.0;
    CHECK(compensate(m, s, limits, FeatureVector{}) == -0.1);
  }

  SUBCASE("bounded for extreme finite inputs") {
    Rng rng(6);
    Mlp m = make_mlp({5, 16, 16, 1}, 0.0, rng);
    const Standardizer s = unit_standardizer();
    for (int i = 0; i < 200; ++i) {
      FeatureVector f{rng.uniform(-1e6, 1e6), rng.uniform(-1e6, 1e6),
                      rng.uniform(-1e6, 1e6), rng.uniform(-1e6, 1e6),
                      rng.uniform(-1e6, 1e6)};
      REQUIRE(std::abs(compensate(m, s, limits, f)) <= limits.epsilon1);
    }
  }
}

TEST_CASE("final command sums then clamps") {
  CHECK(final_command(0.02, 0.0, 0.6) == 0.02);
  CHECK(final_command(0.02, 0.01, 0.6) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(final_command(0.5, 0.3, 0.6) == 0.6);
  CHECK(final_command(-0.5, -0.3, 0.6) == -0.6);
}

TEST_CASE("training on zero labels yields a near-null compensator") {
  const auto rows = synthetic_rows(1200, 23, [](const LogRow&) {
    return 0.0;
  });
  const auto samples = build_dataset(rows);
  TrainConfig cfg;
  cfg.seed = 3;
  cfg.max_epochs = 500;
  cfg.early_stop_delta = 1e-9;
  auto [model, standardizer, report] = train_neurodob(samples, cfg);

  CHECK(report.best_val_loss <= 1e-6);

  const CompensationLimits limits{0.1};
  double max_dc = 0.0;
  for (const auto& s : samples) {
    max_dc = std::max(max_dc,
                      std::abs(compensate(model, standardizer, limits,
                                          s.features)));
  }
  CHECK(max_dc <= 1e-3);
}

TEST_CASE("training recovers a linear steering rule") {
  const auto rows = synthetic_rows(2000, 31, [](const LogRow& r) {
    return 0.5 * r.e_y;
  });
  const auto samples = build_dataset(rows);
  TrainConfig cfg;
  cfg.seed = 5;
  cfg.max_epochs = 400;
  cfg.lr = 3e-3;  // rides over the early plateau on this synthetic rule
  cfg.early_stop_delta = 1e-7;
  auto [model, standardizer, report] = train_neurodob(samples, cfg);

  // held-out tail (same split convention as fit)
  const std::size_t n_val = samples.size() / 5;
  const std::size_t n_train = samples.size() - n_val;
  double mse = 0.0, var = 0.0, mean = 0.0;
  for (std::size_t i = n_train; i < samples.size(); ++i) {
    mean += samples[i].delta_c_target;
  }
  mean /= static_cast<double>(n_val);
  const CompensationLimits limits{1.0};
  for (std::size_t i = n_train; i < samples.size(); ++i) {
    const double pred =
        compensate(model, standardizer, limits, samples[i].features);
    const double err = pred - samples[i].delta_c_target;
    mse += err * err;
    const double dev = samples[i].delta_c_target - mean;
    var += dev * dev;
  }
  mse /= static_cast<double>(n_val);
  var /= static_cast<double>(n_val);
  CHECK(mse <= 0.01 * var);
}

TEST_CASE("checkpoint round trip keeps the compensation function") {
  const auto rows = synthetic_rows(1000, 37, [](const LogRow& r) {
    return 0.2 * r.e_y - 0.05 * r.e_psi;
  });
  const auto samples = build_dataset(rows);
  TrainConfig cfg;
  cfg.seed = 7;
  cfg.max_epochs = 30;
  auto [model, standardizer, report] = train_neurodob(samples, cfg);

  const std::string path = "ndob_ckpt_test.txt";
  save_checkpoint(path, model, standardizer);
  const auto [loaded_model, loaded_std] = load_checkpoint(path);

  const CompensationLimits limits{0.1};
  Rng rng(41);
  bool identical = true;
  for (int i = 0; i < 1000; ++i) {
    const FeatureVector f{rng.normal(), rng.normal(), rng.normal(),
                          rng.normal(), rng.normal()};
    identical = identical &&
                compensate(model, standardizer, limits, f) ==
                    compensate(loaded_model, loaded_std, limits, f);
  }
  CHECK(identical);
  std::remove(path.c_str());
}
