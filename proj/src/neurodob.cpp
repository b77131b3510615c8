#include "neurodob/neurodob.hpp"

#include <algorithm>
#include <cmath>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

std::vector<TrainingSample> build_dataset(std::span<const LogRow> rows,
                                          DatasetBuildReport* report) {
  if (rows.empty()) throw EmptyAfterFiltering("no log rows");
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    const double cols[] = {r.t,        r.e_y,       r.e_y_dot, r.e_psi,
                           r.e_psi_dot, r.delta_lqr, r.delta_d};
    for (const double c : cols) {
      if (!std::isfinite(c)) {
        throw MisalignedLog("non-finite value at t = " + g17(r.t));
      }
    }
    if (!(r.t > prev_t)) {
      throw MisalignedLog("timestamps must strictly increase near t = " +
                          g17(r.t));
    }
    prev_t = r.t;
  }

  std::vector<double> labels;
  labels.reserve(rows.size());
  for (const auto& r : rows) labels.push_back(r.delta_d - r.delta_lqr);

  double mean = 0.0;
  for (const double v : labels) mean += v;
  mean /= static_cast<double>(labels.size());
  double var = 0.0;
  for (const double v : labels) var += (v - mean) * (v - mean);
  var /= static_cast<double>(labels.size());
  const double sigma = std::sqrt(var);

  std::vector<TrainingSample> out;
  out.reserve(rows.size());
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (sigma > 0.0 && std::abs(labels[i] - mean) > 6.0 * sigma) {
      ++dropped;
      continue;
    }
    const auto& r = rows[i];
    TrainingSample s;
    s.features = {r.e_y, r.e_y_dot, r.e_psi, r.e_psi_dot, r.delta_lqr};
    s.delta_c_target = labels[i];
    out.push_back(s);
  }
  if (report != nullptr) {
    report->total_rows = rows.size();
    report->dropped_outliers = dropped;
  }
  if (out.empty()) throw EmptyAfterFiltering("all rows filtered out");
  return out;
}

namespace {
constexpr const char* kTrainingHeader =
    "t_s,e_y,e_y_dot,e_psi,e_psi_dot,delta_lqr,delta_d";
}

void save_training_csv(const std::string& path, std::span<const LogRow> rows) {
  std::string out = kTrainingHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += g17(r.t);
    out += ',';
    out += g17(r.e_y);
    out += ',';
    out += g17(r.e_y_dot);
    out += ',';
    out += g17(r.e_psi);
    out += ',';
    out += g17(r.e_psi_dot);
    out += ',';
    out += g17(r.delta_lqr);
    out += ',';
    out += g17(r.delta_d);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<LogRow> load_training_csv(const std::string& path) {
  auto lines = split(read_file(path), '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw IoFailure("empty training CSV: " + path);

  // header-based column lookup so richer per-run logs also load
  const auto header = split(trim(lines[0]), ',');
  const char* needed[] = {"t_s",       "e_y",       "e_y_dot", "e_psi",
                          "e_psi_dot", "delta_lqr", "delta_d"};
  int col_of[7];
  for (int i = 0; i < 7; ++i) {
    const auto it = std::find(header.begin(), header.end(), needed[i]);
    if (it == header.end()) {
      throw IoFailure(std::string("training CSV misses column ") + needed[i]);
    }
    col_of[i] = static_cast<int>(it - header.begin());
  }

  std::vector<LogRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cols = split(lines[li], ',');
    if (cols.size() < header.size()) {
      throw IoFailure("short row " + std::to_string(li + 1) + " in " + path);
    }
    LogRow r;
    r.t = parse_double(trim(cols[static_cast<std::size_t>(col_of[0])]));
    r.e_y = parse_double(trim(cols[static_cast<std::size_t>(col_of[1])]));
    r.e_y_dot = parse_double(trim(cols[static_cast<std::size_t>(col_of[2])]));
    r.e_psi = parse_double(trim(cols[static_cast<std::size_t>(col_of[3])]));
    r.e_psi_dot =
        parse_double(trim(cols[static_cast<std::size_t>(col_of[4])]));
    r.delta_lqr =
        parse_double(trim(cols[static_cast<std::size_t>(col_of[5])]));
    r.delta_d = parse_double(trim(cols[static_cast<std::size_t>(col_of[6])]));
    rows.push_back(r);
  }
  return rows;
}

double compensate(const Mlp& model, const Standardizer& std_,
                  const CompensationLimits& limits,
                  const FeatureVector& features) {
  const Eigen::VectorXd z =
      std_.standardize(Eigen::VectorXd(features.vec()));
  const double raw = std_.destandardize_output(forward(model, z));
  return std::clamp(raw, -limits.epsilon1, limits.epsilon1);
}

double final_command(double delta_lqr, double delta_c, double steer_limit) {
  return std::clamp(delta_lqr + delta_c, -steer_limit, steer_limit);
}

std::tuple<Mlp, Standardizer, TrainReport> train_neurodob(
    std::span<const TrainingSample> samples, const TrainConfig& cfg) {
  if (samples.empty()) throw EmptyDataset("train_neurodob: no samples");

  Eigen::MatrixXd inputs(kFeatureCount,
                         static_cast<Eigen::Index>(samples.size()));
  Eigen::RowVectorXd targets(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    inputs.col(static_cast<Eigen::Index>(i)) = samples[i].features.vec();
    targets(static_cast<Eigen::Index>(i)) = samples[i].delta_c_target;
  }

  const Standardizer std_ = Standardizer::fit(inputs, targets);
  Dataset data;
  data.inputs = std_.standardize(inputs);
  data.targets = targets;
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    data.targets(i) = std_.standardize_output(targets(i));
  }

  Rng init_rng = Rng::stream(cfg.seed, "mlp-init");
  Mlp model = make_mlp({kFeatureCount, 64, 64, 64, 64, 1}, 0.2, init_rng);
  TrainReport report = fit(model, data, cfg);
  return {std::move(model), std_, std::move(report)};
}

}  // namespace ndob
