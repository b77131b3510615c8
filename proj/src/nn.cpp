#include "neurodob/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

Mlp make_mlp(const std::vector<int>& dims, double dropout_p, Rng& init_rng) {
  if (dims.size() < 2) throw ConfigError("mlp needs at least two dims");
  for (const int d : dims) {
    if (d < 1) throw ConfigError("mlp dims must be >= 1");
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw ConfigError("dropout_p must lie in [0, 1)");
  }
  if (dims.back() != 1) {
    throw ConfigError("this network family has a scalar output");
  }
  Mlp m;
  m.dims = dims;
  m.dropout_p = dropout_p;
  const std::size_t layers = dims.size() - 1;
  m.w.resize(layers);
  m.b.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    m.w[l].resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < m.w[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < m.w[l].cols(); ++c) {
        m.w[l](r, c) = init_rng.uniform(-bound, bound);
      }
    }
    m.b[l] = Eigen::VectorXd::Zero(fan_out);
  }
  m.bn.resize(layers - 1);
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const int units = dims[l + 1];
    m.bn[l].gamma = Eigen::VectorXd::Ones(units);
    m.bn[l].beta = Eigen::VectorXd::Zero(units);
    m.bn[l].run_mean = Eigen::VectorXd::Zero(units);
    m.bn[l].run_var = Eigen::VectorXd::Ones(units);
  }
  return m;
}

namespace {

struct LayerCache {
  Eigen::MatrixXd input;    // H_{l-1}
  Eigen::MatrixXd xhat;     // normalized pre-activation
  Eigen::MatrixXd t;        // tanh output
  Eigen::MatrixXd mask;     // dropout mask (already scaled); empty if none
  Eigen::VectorXd inv_std;  // 1/sqrt(var + eps) used in normalization
  Eigen::VectorXd batch_mean;
  Eigen::VectorXd batch_var;
};

struct ForwardResult {
  Eigen::RowVectorXd yhat;
  std::vector<LayerCache> caches;  // one per hidden layer
  Eigen::MatrixXd last_hidden;
};

/// Shared forward pass. batch_stats selects train-mode BN statistics;
/// masks (if non-null) supplies per-layer inverted-dropout masks.
ForwardResult forward_pass(const Mlp& m, const Eigen::MatrixXd& inputs,
                           bool batch_stats,
                           const std::vector<Eigen::MatrixXd>* masks) {
  const std::size_t layers = m.layer_count();
  ForwardResult fr;
  fr.caches.resize(m.hidden_count());
  Eigen::MatrixXd h = inputs;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    LayerCache& cache = fr.caches[l];
    cache.input = h;
    Eigen::MatrixXd z = (m.w[l] * h).colwise() + m.b[l];
    const BnLayer& bn = m.bn[l];
    if (batch_stats) {
      cache.batch_mean = z.rowwise().mean();
      Eigen::MatrixXd centered = z.colwise() - cache.batch_mean;
      cache.batch_var = centered.array().square().rowwise().mean();
      cache.inv_std =
          (cache.batch_var.array() + kBnEps).sqrt().inverse().matrix();
      cache.xhat = centered.array().colwise() * cache.inv_std.array();
    } else {
      cache.inv_std = (bn.run_var.array() + kBnEps).sqrt().inverse().matrix();
      cache.xhat = (z.colwise() - bn.run_mean).array().colwise() *
                   cache.inv_std.array();
    }
    Eigen::MatrixXd y =
        (cache.xhat.array().colwise() * bn.gamma.array()).matrix();
    y.colwise() += bn.beta;
    cache.t = y.array().tanh().matrix();
    if (masks != nullptr && (*masks)[l].size() > 0) {
      cache.mask = (*masks)[l];
      h = cache.t.cwiseProduct(cache.mask);
    } else {
      h = cache.t;
    }
  }
  fr.last_hidden = h;
  fr.yhat = ((m.w.back() * h).colwise() + m.b.back()).row(0);
  return fr;
}

double mse_of(const Eigen::RowVectorXd& yhat, const Eigen::RowVectorXd& y) {
  return (yhat - y).array().square().mean();
}

/// Backprop through the cached forward pass. Fills grads (weight-decay term
/// included) and returns the batch MSE.
double backward_pass(const Mlp& m, const ForwardResult& fr,
                     const Eigen::RowVectorXd& targets, double weight_decay,
                     bool batch_stats, Gradients& g) {
  const std::size_t layers = m.layer_count();
  const auto batch = static_cast<double>(targets.size());

  g.w.resize(layers);
  g.b.resize(layers);
  g.gamma.resize(m.hidden_count());
  g.beta.resize(m.hidden_count());

  const double loss = mse_of(fr.yhat, targets);
  Eigen::RowVectorXd dy = 2.0 * (fr.yhat - targets) / batch;

  g.w[layers - 1] = dy * fr.last_hidden.transpose();
  g.b[layers - 1] = Eigen::VectorXd::Constant(1, dy.sum());
  Eigen::MatrixXd dh = m.w.back().transpose() * dy;

  for (std::size_t li = m.hidden_count(); li-- > 0;) {
    const LayerCache& cache = fr.caches[li];
    const BnLayer& bn = m.bn[li];
    Eigen::MatrixXd dt =
        cache.mask.size() > 0 ? dh.cwiseProduct(cache.mask) : std::move(dh);
    // tanh'
    Eigen::MatrixXd dyb =
        dt.cwiseProduct((1.0 - cache.t.array().square()).matrix());
    g.gamma[li] = dyb.cwiseProduct(cache.xhat).rowwise().sum();
    g.beta[li] = dyb.rowwise().sum();
    Eigen::MatrixXd dxhat = dyb.array().colwise() * bn.gamma.array();
    Eigen::MatrixXd dz;
    if (batch_stats) {
      const Eigen::VectorXd sum_dxhat = dxhat.rowwise().sum();
      const Eigen::VectorXd sum_dxhat_xhat =
          dxhat.cwiseProduct(cache.xhat).rowwise().sum();
      dz = dxhat * batch;
      dz.colwise() -= sum_dxhat;
      dz -= (cache.xhat.array().colwise() * sum_dxhat_xhat.array()).matrix();
      dz = (dz.array().colwise() * (cache.inv_std.array() / batch)).matrix();
    } else {
      dz = dxhat.array().colwise() * cache.inv_std.array();
    }
    g.w[li] = dz * cache.input.transpose();
    g.b[li] = dz.rowwise().sum();
    dh = m.w[li].transpose() * dz;
  }

  if (weight_decay != 0.0) {
    for (std::size_t l = 0; l < layers; ++l) {
      g.w[l] += 2.0 * weight_decay * m.w[l];
    }
  }
  return loss;
}

}  // namespace

Eigen::MatrixXd forward_eval(const Mlp& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != model.dims.front()) {
    throw ConfigError("forward: input dimension mismatch");
  }
  ForwardResult fr = forward_pass(model, inputs, false, nullptr);
  if (!fr.yhat.allFinite()) {
    throw NonFiniteActivation("forward produced NaN/Inf");
  }
  return fr.yhat;
}

double forward(const Mlp& model, const Eigen::VectorXd& input) {
  if (model.dims.back() != 1) {
    throw ConfigError("scalar forward needs output dim 1");
  }
  return forward_eval(model, input)(0, 0);
}

double forward_mc_dropout(const Mlp& model, const Eigen::VectorXd& input,
                          Rng& dropout_rng) {
  std::vector<Eigen::MatrixXd> masks(model.hidden_count());
  const double keep = 1.0 - model.dropout_p;
  const double scale = keep > 0.0 ? 1.0 / keep : 0.0;
  for (std::size_t l = 0; l < model.hidden_count(); ++l) {
    masks[l].resize(model.dims[l + 1], 1);
    for (Eigen::Index r = 0; r < masks[l].rows(); ++r) {
      masks[l](r, 0) = dropout_rng.uniform() < keep ? scale : 0.0;
    }
  }
  ForwardResult fr = forward_pass(model, input, false, &masks);
  return fr.yhat(0);
}

std::vector<Eigen::MatrixXd> bn_normalized_activations(
    const Mlp& model, const Eigen::MatrixXd& inputs) {
  ForwardResult fr = forward_pass(model, inputs, true, nullptr);
  std::vector<Eigen::MatrixXd> xhats;
  xhats.reserve(fr.caches.size());
  for (const auto& cache : fr.caches) xhats.push_back(cache.xhat);
  return xhats;
}

Gradients gradients(const Mlp& model, const Eigen::MatrixXd& inputs,
                    const Eigen::RowVectorXd& targets, double weight_decay,
                    double* loss_out) {
  if (inputs.cols() != targets.size() || inputs.cols() == 0) {
    throw ConfigError("gradients: batch size mismatch");
  }
  const bool batch_stats = model.mode == NnMode::Train;
  ForwardResult fr = forward_pass(model, inputs, batch_stats, nullptr);
  Gradients g;
  const double loss = backward_pass(model, fr, targets, weight_decay,
                                    batch_stats, g);
  if (loss_out != nullptr) *loss_out = loss;
  return g;
}

AdamState make_adam(const Mlp& model, double lr) {
  AdamState s;
  s.lr = lr;
  auto zeros_like_w = [&model] {
    std::vector<Eigen::MatrixXd> v;
    for (const auto& w : model.w) v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    return v;
  };
  auto zeros_like_b = [&model] {
    std::vector<Eigen::VectorXd> v;
    for (const auto& b : model.b) v.push_back(Eigen::VectorXd::Zero(b.size()));
    return v;
  };
  auto zeros_like_bn = [&model] {
    std::vector<Eigen::VectorXd> v;
    for (const auto& bn : model.bn) v.push_back(Eigen::VectorXd::Zero(bn.gamma.size()));
    return v;
  };
  s.m.w = zeros_like_w();
  s.m.b = zeros_like_b();
  s.m.gamma = zeros_like_bn();
  s.m.beta = zeros_like_bn();
  s.v.w = zeros_like_w();
  s.v.b = zeros_like_b();
  s.v.gamma = zeros_like_bn();
  s.v.beta = zeros_like_bn();
  return s;
}

namespace {

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, const AdamState& s,
                 double corr1, double corr2) {
  m = s.beta1 * m + (1.0 - s.beta1) * grad;
  v = (s.beta2 * v.array() + (1.0 - s.beta2) * grad.array().square()).matrix();
  param.array() -=
      s.lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + s.eps);
}

}  // namespace

double backward_and_step(Mlp& model, const Eigen::MatrixXd& inputs,
                         const Eigen::RowVectorXd& targets, AdamState& opt,
                         double weight_decay, Rng& dropout_rng) {
  if (model.mode != NnMode::Train) {
    throw ConfigError("backward_and_step requires Train mode");
  }
  if (inputs.cols() != targets.size() || inputs.cols() == 0) {
    throw ConfigError("backward_and_step: batch size mismatch");
  }

  std::vector<Eigen::MatrixXd> masks(model.hidden_count());
  if (model.dropout_p > 0.0) {
    const double keep = 1.0 - model.dropout_p;
    const double scale = 1.0 / keep;
    for (std::size_t l = 0; l < model.hidden_count(); ++l) {
      masks[l].resize(model.dims[l + 1], inputs.cols());
      for (Eigen::Index c = 0; c < masks[l].cols(); ++c) {
        for (Eigen::Index r = 0; r < masks[l].rows(); ++r) {
          masks[l](r, c) = dropout_rng.uniform() < keep ? scale : 0.0;
        }
      }
    }
  }

  ForwardResult fr = forward_pass(model, inputs, true,
                                  model.dropout_p > 0.0 ? &masks : nullptr);
  Gradients g;
  const double loss =
      backward_pass(model, fr, targets, weight_decay, true, g);
  if (!std::isfinite(loss)) {
    throw NonFiniteGradient("training loss diverged to NaN/Inf");
  }

  // BN running statistics (population variance convention)
  for (std::size_t l = 0; l < model.hidden_count(); ++l) {
    BnLayer& bn = model.bn[l];
    bn.run_mean = (1.0 - kBnMomentum) * bn.run_mean +
                  kBnMomentum * fr.caches[l].batch_mean;
    bn.run_var = (1.0 - kBnMomentum) * bn.run_var +
                 kBnMomentum * fr.caches[l].batch_var;
  }

  opt.t += 1;
  const double corr1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.t));
  const double corr2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.t));
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    adam_update(model.w[l], g.w[l], opt.m.w[l], opt.v.w[l], opt, corr1, corr2);
    adam_update(model.b[l], g.b[l], opt.m.b[l], opt.v.b[l], opt, corr1, corr2);
  }
  for (std::size_t l = 0; l < model.hidden_count(); ++l) {
    adam_update(model.bn[l].gamma, g.gamma[l], opt.m.gamma[l], opt.v.gamma[l],
                opt, corr1, corr2);
    adam_update(model.bn[l].beta, g.beta[l], opt.m.beta[l], opt.v.beta[l], opt,
                corr1, corr2);
  }
  return loss;
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.lr > 0.0) || !(cfg.weight_decay >= 0.0) || cfg.batch_size < 1 ||
      cfg.max_epochs < 1 || !(cfg.plateau_factor > 0.0) ||
      !(cfg.plateau_factor < 1.0) || cfg.plateau_patience < 1 ||
      !(cfg.early_stop_delta > 0.0) || cfg.early_stop_patience < 1) {
    throw ConfigError("invalid training configuration");
  }
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction <= 0.5)) {
    throw ConfigError("val_fraction must lie in (0, 0.5]");
  }
}

namespace {

struct ParamSnapshot {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  std::vector<BnLayer> bn;
};

ParamSnapshot snapshot(const Mlp& m) { return {m.w, m.b, m.bn}; }

void restore(Mlp& m, const ParamSnapshot& s) {
  m.w = s.w;
  m.b = s.b;
  m.bn = s.bn;
}

}  // namespace

TrainReport fit(Mlp& model, const Dataset& data, const TrainConfig& cfg) {
  validate(cfg);
  const Eigen::Index n = data.inputs.cols();
  if (n == 0) throw EmptyDataset("fit: empty dataset");
  if (data.targets.size() != n) {
    throw ConfigError("fit: inputs/targets size mismatch");
  }
  if (n < static_cast<Eigen::Index>(10) * cfg.batch_size) {
    throw EmptyDataset("fit: dataset smaller than 10 x batch_size");
  }

  const auto n_val = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(cfg.val_fraction * n)));
  const Eigen::Index n_train = n - n_val;
  const Eigen::MatrixXd val_x = data.inputs.rightCols(n_val);
  const Eigen::RowVectorXd val_y = data.targets.tail(n_val);

  Rng shuffle_rng = Rng::stream(cfg.seed, "batch-shuffle");
  Rng dropout_rng = Rng::stream(cfg.seed, "dropout");
  AdamState opt = make_adam(model, cfg.lr);

  TrainReport report;
  // counters use the early_stop_delta threshold; the restored snapshot tracks
  // any strict improvement, so the returned model is the argmin of val_loss
  double best_val = std::numeric_limits<double>::infinity();
  double best_snapshot_val = std::numeric_limits<double>::infinity();
  ParamSnapshot best = snapshot(model);
  int plateau_count = 0;
  int stop_count = 0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
  std::iota(order.begin(), order.end(), 0);

  const Eigen::Index bs = cfg.batch_size;
  Eigen::MatrixXd batch_x(data.inputs.rows(), bs);
  Eigen::RowVectorXd batch_y(bs);

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    model.mode = NnMode::Train;
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    Eigen::Index batches = 0;
    for (Eigen::Index start = 0; start + bs <= n_train; start += bs) {
      for (Eigen::Index i = 0; i < bs; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + i)];
        batch_x.col(i) = data.inputs.col(src);
        batch_y(i) = data.targets(src);
      }
      epoch_loss +=
          backward_and_step(model, batch_x, batch_y, opt, cfg.weight_decay,
                            dropout_rng);
      ++batches;
    }
    model.mode = NnMode::Eval;
    const double val_loss = mse_of(forward_eval(model, val_x), val_y);

    report.train_loss.push_back(batches > 0 ? epoch_loss / batches : 0.0);
    report.val_loss.push_back(val_loss);
    report.lr_trace.push_back(opt.lr);
    report.epochs_run = epoch + 1;

    if (val_loss < best_snapshot_val) {
      best_snapshot_val = val_loss;
      best = snapshot(model);
    }
    if (val_loss < best_val - cfg.early_stop_delta) {
      best_val = val_loss;
      plateau_count = 0;
      stop_count = 0;
    } else {
      ++plateau_count;
      ++stop_count;
    }
    if (stop_count >= cfg.early_stop_patience) {
      report.stop_reason = StopReason::EarlyStop;
      break;
    }
    if (plateau_count >= cfg.plateau_patience) {
      opt.lr *= cfg.plateau_factor;
      plateau_count = 0;
    }
  }
  if (report.stop_reason != StopReason::EarlyStop) {
    report.stop_reason = StopReason::MaxEpochs;
  }
  report.best_val_loss =
      *std::min_element(report.val_loss.begin(), report.val_loss.end());
  restore(model, best);
  model.mode = NnMode::Eval;
  return report;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& inputs,
                               const Eigen::RowVectorXd& targets) {
  if (inputs.cols() == 0 || targets.size() != inputs.cols()) {
    throw EmptyDataset("standardizer: empty or mismatched data");
  }
  Standardizer s;
  s.in_mean_ = inputs.rowwise().mean();
  s.in_std_ = (inputs.colwise() - s.in_mean_)
                  .array()
                  .square()
                  .rowwise()
                  .mean()
                  .sqrt()
                  .matrix();
  for (Eigen::Index i = 0; i < s.in_std_.size(); ++i) {
    if (s.in_std_[i] < 1e-12) {
      throw DegenerateFeature("input feature " + std::to_string(i) +
                              " has zero spread");
    }
  }
  s.out_mean_ = targets.mean();
  const double var = (targets.array() - s.out_mean_).square().mean();
  s.out_std_ = std::sqrt(var);
  if (s.out_std_ < 1e-12) s.out_std_ = 1.0;
  return s;
}

Eigen::VectorXd Standardizer::standardize(const Eigen::VectorXd& x) const {
  return ((x - in_mean_).array() / in_std_.array()).matrix();
}

Eigen::MatrixXd Standardizer::standardize(const Eigen::MatrixXd& x) const {
  return ((x.colwise() - in_mean_).array().colwise() / in_std_.array())
      .matrix();
}

double Standardizer::standardize_output(double y) const {
  return (y - out_mean_) / out_std_;
}

double Standardizer::destandardize_output(double y) const {
  return y * out_std_ + out_mean_;
}

Standardizer Standardizer::from_moments(Eigen::VectorXd in_mean,
                                        Eigen::VectorXd in_std,
                                        double out_mean, double out_std) {
  Standardizer s;
  s.in_mean_ = std::move(in_mean);
  s.in_std_ = std::move(in_std);
  s.out_mean_ = out_mean;
  s.out_std_ = out_std;
  for (Eigen::Index i = 0; i < s.in_std_.size(); ++i) {
    if (!(s.in_std_[i] > 0.0)) {
      throw DegenerateFeature("input std must be > 0");
    }
  }
  if (!(s.out_std_ > 0.0)) throw DegenerateFeature("output std must be > 0");
  return s;
}

namespace {

constexpr const char* kCkptHeader = "neurodob-ckpt v1";

void append_vec(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += g17(v[i]);
  }
  out += '\n';
}

void append_mat_rowmajor(std::string& out, const Eigen::MatrixXd& m) {
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) out += ' ';
      out += g17(m(r, c));
      first = false;
    }
  }
  out += '\n';
}

Eigen::VectorXd parse_vec(const std::string& line, Eigen::Index expected,
                          const std::string& what) {
  const auto toks = split_ws(line);
  if (static_cast<Eigen::Index>(toks.size()) != expected) {
    throw IoFailure("checkpoint: " + what + " expects " +
                    std::to_string(expected) + " values, got " +
                    std::to_string(toks.size()));
  }
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    v[i] = parse_double(toks[static_cast<std::size_t>(i)]);
  }
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Mlp& model,
                     const Standardizer& std_) {
  std::string out;
  out += kCkptHeader;
  out += '\n';
  for (std::size_t i = 0; i < model.dims.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(model.dims[i]);
  }
  out += '\n';
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    append_mat_rowmajor(out, model.w[l]);
    append_vec(out, model.b[l]);
  }
  for (const auto& bn : model.bn) {
    append_vec(out, bn.gamma);
    append_vec(out, bn.beta);
    append_vec(out, bn.run_mean);
    append_vec(out, bn.run_var);
  }
  append_vec(out, std_.input_mean());
  append_vec(out, std_.input_std());
  out += g17(std_.output_mean());
  out += '\n';
  out += g17(std_.output_std());
  out += '\n';
  write_file(path, out);
}

std::pair<Mlp, Standardizer> load_checkpoint(const std::string& path) {
  auto lines = split(read_file(path), '\n');
  std::size_t cursor = 0;
  auto next_line = [&]() -> const std::string& {
    while (cursor < lines.size() && trim(lines[cursor]).empty()) ++cursor;
    if (cursor >= lines.size()) {
      throw IoFailure("checkpoint truncated: " + path);
    }
    return lines[cursor++];
  };

  if (trim(next_line()) != kCkptHeader) {
    throw IoFailure("not a checkpoint file: " + path);
  }
  std::vector<int> dims;
  for (const auto& tok : split_ws(next_line())) {
    dims.push_back(static_cast<int>(parse_int(tok)));
  }
  if (dims.size() < 2) throw IoFailure("checkpoint: bad dims line");

  Mlp m;
  m.dims = dims;
  m.mode = NnMode::Eval;
  const std::size_t layers = dims.size() - 1;
  m.w.resize(layers);
  m.b.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const Eigen::Index rows = dims[l + 1];
    const Eigen::Index cols = dims[l];
    const Eigen::VectorXd flat =
        parse_vec(next_line(), rows * cols, "weights");
    m.w[l].resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m.w[l](r, c) = flat[r * cols + c];
      }
    }
    m.b[l] = parse_vec(next_line(), rows, "biases");
  }
  m.bn.resize(layers - 1);
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const Eigen::Index units = dims[l + 1];
    m.bn[l].gamma = parse_vec(next_line(), units, "bn gamma");
    m.bn[l].beta = parse_vec(next_line(), units, "bn beta");
    m.bn[l].run_mean = parse_vec(next_line(), units, "bn running mean");
    m.bn[l].run_var = parse_vec(next_line(), units, "bn running variance");
    if (m.bn[l].run_var.minCoeff() <= 0.0) {
      throw IoFailure("checkpoint: running variance must be > 0");
    }
  }
  const Eigen::Index d_in = dims.front();
  const Eigen::VectorXd in_mean = parse_vec(next_line(), d_in, "input means");
  const Eigen::VectorXd in_std = parse_vec(next_line(), d_in, "input stds");
  const double out_mean = parse_vec(next_line(), 1, "output mean")(0);
  const double out_std = parse_vec(next_line(), 1, "output std")(0);
  return {std::move(m), Standardizer::from_moments(in_mean, in_std, out_mean,
                                                   out_std)};
}

}  // namespace ndob
