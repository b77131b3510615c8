#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "neurodob/rng.hpp"

namespace ndob {

enum class NnMode { Train, Eval };

/// Per-hidden-layer batch normalization parameters and running statistics.
struct BnLayer {
  Eigen::VectorXd gamma;     // scale
  Eigen::VectorXd beta;      // shift
  Eigen::VectorXd run_mean;  // running mean (Eval-mode statistics)
  Eigen::VectorXd run_var;   // running variance, > 0
};

/// Fully connected net: per hidden layer affine -> batch norm -> tanh ->
/// dropout; the output layer is affine only. Dropout is inverted (activations
/// scaled by 1/(1-p) at train time), so Eval mode needs no rescaling.
struct Mlp {
  std::vector<int> dims;            // e.g. {5, 64, 64, 64, 64, 1}
  std::vector<Eigen::MatrixXd> w;   // w[l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> b;   // b[l]: dims[l+1]
  std::vector<BnLayer> bn;          // one per hidden layer
  double dropout_p = 0.2;
  NnMode mode = NnMode::Eval;

  std::size_t layer_count() const { return w.size(); }
  std::size_t hidden_count() const { return bn.size(); }
};

/// Uniform +-sqrt(6 / (fan_in + fan_out)) weight init, zero biases,
/// BN gamma = 1, beta = 0, running stats (0, 1).
Mlp make_mlp(const std::vector<int>& dims, double dropout_p, Rng& init_rng);

// double precision allows a much smaller variance floor than the float32
// customary 1e-5; this keeps normalized batch variance within 1e-6 of 1
inline constexpr double kBnEps = 1e-12;
inline constexpr double kBnMomentum = 0.1;  // running = 0.9 old + 0.1 batch

/// Eval-mode forward for a batch; columns are samples. Uses running BN stats,
/// no dropout. Throws NonFiniteActivation.
Eigen::MatrixXd forward_eval(const Mlp& model, const Eigen::MatrixXd& inputs);

/// Eval-mode scalar forward (dims.back() must be 1).
double forward(const Mlp& model, const Eigen::VectorXd& input);

/// Monte-Carlo dropout forward: running-stat BN, one fresh inverted-dropout
/// mask per hidden layer. Averaging many draws recovers the Eval output
/// (useful as an uncertainty probe and to test the dropout convention).
double forward_mc_dropout(const Mlp& model, const Eigen::VectorXd& input,
                          Rng& dropout_rng);

/// Train-mode normalized activations (the per-layer batch-statistics BN
/// output before scale/shift); diagnostic surface for verifying that BN
/// actually whitens each unit over the batch.
std::vector<Eigen::MatrixXd> bn_normalized_activations(
    const Mlp& model, const Eigen::MatrixXd& inputs);

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  std::vector<Eigen::VectorXd> gamma;
  std::vector<Eigen::VectorXd> beta;
};

/// Gradients of  mean((yhat - y)^2) + weight_decay * sum ||W||_F^2  with
/// respect to every parameter. BN statistics follow model.mode (Train: batch
/// statistics; Eval: running statistics). Dropout is never applied here;
/// training applies it inside backward_and_step. Running stats untouched.
Gradients gradients(const Mlp& model, const Eigen::MatrixXd& inputs,
                    const Eigen::RowVectorXd& targets, double weight_decay,
                    double* loss_out = nullptr);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  Gradients m;  // first moments, same shapes as the parameters
  Gradients v;  // second moments
};

AdamState make_adam(const Mlp& model, double lr);

/// One training step: train-mode forward (batch BN statistics, fresh dropout
/// masks), backprop, Adam update, BN running-stat update. Returns the batch
/// MSE (decay term excluded). Throws NonFiniteGradient.
double backward_and_step(Mlp& model, const Eigen::MatrixXd& inputs,
                         const Eigen::RowVectorXd& targets, AdamState& opt,
                         double weight_decay, Rng& dropout_rng);

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int batch_size = 64;
  int max_epochs = 2000;
  double plateau_factor = 0.5;
  int plateau_patience = 10;
  double early_stop_delta = 1e-5;
  int early_stop_patience = 50;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

enum class StopReason { EarlyStop, MaxEpochs };

struct TrainReport {
  int epochs_run = 0;
  std::vector<double> train_loss;  // mean batch MSE per epoch
  std::vector<double> val_loss;    // eval-mode MSE on the held-out tail
  std::vector<double> lr_trace;    // lr in effect each epoch
  double best_val_loss = 0.0;
  StopReason stop_reason = StopReason::MaxEpochs;
};

struct Dataset {
  Eigen::MatrixXd inputs;        // d x N, columns are samples
  Eigen::RowVectorXd targets;    // 1 x N
};

/// Trains with Adam + MSE, reduce-on-plateau (factor 0.5 after
/// plateau_patience epochs without val improvement) and early stopping
/// (after early_stop_patience epochs without improvement > early_stop_delta).
/// The validation split is the trailing val_fraction of the dataset,
/// unshuffled, to avoid temporal leakage. On return the model carries the
/// best-validation parameter snapshot and is in Eval mode. Deterministic for
/// a fixed config.seed.
TrainReport fit(Mlp& model, const Dataset& data, const TrainConfig& cfg);

/// Per-feature input scaling and scalar output scaling, fitted with the
/// population (1/N) standard deviation convention.
class Standardizer {
 public:
  Standardizer() = default;

  /// Throws DegenerateFeature if an input feature has zero spread. A
  /// zero-spread *output* is allowed (std clamps to 1) so constant-label
  /// datasets remain trainable.
  static Standardizer fit(const Eigen::MatrixXd& inputs,
                          const Eigen::RowVectorXd& targets);

  Eigen::VectorXd standardize(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd standardize(const Eigen::MatrixXd& x) const;
  double standardize_output(double y) const;
  double destandardize_output(double y) const;

  const Eigen::VectorXd& input_mean() const { return in_mean_; }
  const Eigen::VectorXd& input_std() const { return in_std_; }
  double output_mean() const { return out_mean_; }
  double output_std() const { return out_std_; }

  static Standardizer from_moments(Eigen::VectorXd in_mean,
                                   Eigen::VectorXd in_std, double out_mean,
                                   double out_std);

 private:
  Eigen::VectorXd in_mean_, in_std_;
  double out_mean_ = 0.0, out_std_ = 1.0;
};

/// Text checkpoint, loadable bit-for-bit:
///   neurodob-ckpt v1
///   <layer dims>
///   per layer: weights (row-major) line, biases line
///   per hidden layer: gamma, beta, running mean, running variance lines
///   standardizer: input means, input stds, output mean, output std
void save_checkpoint(const std::string& path, const Mlp& model,
                     const Standardizer& std);
std::pair<Mlp, Standardizer> load_checkpoint(const std::string& path);

}  // namespace ndob
