#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/matrix.hpp"
#include "hybridcast/prediction.hpp"
#include "hybridcast/timeseries.hpp"

namespace hybridcast::convlstm {

enum class Gate : std::size_t { input = 0, forget = 1, output = 2, candidate = 3 };
inline constexpr std::size_t kGateCount = 4;

/// Cell geometry. The input transform of every gate is a 1-D same-padded convolution over the
/// feature axis with `filters` output channels, so the hidden width is features * filters and
/// hidden unit (position p, channel c) lives at index p * filters + c.
struct Shape {
  std::size_t features = 2;
  std::size_t filters = 8;
  std::size_t kernel = 3;

  std::size_t hidden() const { return features * filters; }
  void validate() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// All trainable values in one flat buffer. Per gate: kernel (filters x kernel), recurrent
/// weights (hidden x hidden, row = destination unit), bias (hidden). Then the readout weights
/// (hidden) and readout bias.
class Params {
 public:
  Params() = default;
  explicit Params(const Shape& shape);

  const Shape& shape() const { return shape_; }
  static std::size_t count(const Shape& shape);
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<double> kernel(Gate g) { return {values_.data() + kernel_offset(g), kernel_size()}; }
  std::span<const double> kernel(Gate g) const { return {values_.data() + kernel_offset(g), kernel_size()}; }
  std::span<double> recurrent(Gate g) { return {values_.data() + recurrent_offset(g), recurrent_size()}; }
  std::span<const double> recurrent(Gate g) const {
    return {values_.data() + recurrent_offset(g), recurrent_size()};
  }
  std::span<double> bias(Gate g) { return {values_.data() + bias_offset(g), shape_.hidden()}; }
  std::span<const double> bias(Gate g) const { return {values_.data() + bias_offset(g), shape_.hidden()}; }
  std::span<double> readout_weights() { return {values_.data() + readout_offset(), shape_.hidden()}; }
  std::span<const double> readout_weights() const { return {values_.data() + readout_offset(), shape_.hidden()}; }
  double& readout_bias() { return values_.back(); }
  double readout_bias() const { return values_.back(); }

  bool all_finite() const;

  friend bool operator==(const Params&, const Params&) = default;

 private:
  std::size_t kernel_size() const { return shape_.filters * shape_.kernel; }
  std::size_t recurrent_size() const { return shape_.hidden() * shape_.hidden(); }
  std::size_t gate_stride() const { return kernel_size() + recurrent_size() + shape_.hidden(); }
  std::size_t kernel_offset(Gate g) const { return static_cast<std::size_t>(g) * gate_stride(); }
  std::size_t recurrent_offset(Gate g) const { return kernel_offset(g) + kernel_size(); }
  std::size_t bias_offset(Gate g) const { return recurrent_offset(g) + recurrent_size(); }
  std::size_t readout_offset() const { return kGateCount * gate_stride(); }

  Shape shape_;
  std::vector<double> values_;
};

struct CellState {
  std::vector<double> h;
  std::vector<double> c;

  static CellState zeros(std::size_t hidden) { return {std::vector<double>(hidden, 0.0), std::vector<double>(hidden, 0.0)}; }
  friend bool operator==(const CellState&, const CellState&) = default;
};

/// Post-activation gate values of one step (i, f, o, candidate).
struct GateValues {
  std::vector<double> input, forget, output, candidate;
};

/// Uniform in +-1/sqrt(fan_in), forget-gate bias 1, readout bias 0.
Params init_params(const Shape& shape, std::uint64_t seed);

/// Same-padded 1-D convolution of `x` (length = features) with one gate's kernel,
/// flattened position-major into `out` (length = hidden).
void convolve(std::span<const double> x, std::span<const double> kernel, const Shape& shape, std::span<double> out);

/// One LSTM step whose gate pre-activations are conv(K_g, x) + U_g h_prev + b_g.
CellState cell_forward(std::span<const double> x, const CellState& prev, const Params& params,
                       GateValues* gates = nullptr);

/// Runs the cell from a zero state over every row of `window` and applies the readout.
double forward(const Matrix& window, const Params& params);

enum class LossKind { huber, mse };
std::string_view loss_name(LossKind kind);
LossKind parse_loss(std::string_view name);

double loss_mse(std::span<const double> actual, std::span<const double> predicted);
double loss_huber(std::span<const double> actual, std::span<const double> predicted, double delta);

/// Per-sample loss of residual e = actual - predicted.
double sample_loss(double residual, LossKind kind, double delta);

/// Adds d(loss)/d(params) for one window into `grad` (same layout as params.values()) and
/// returns the loss. At |e| == delta the quadratic branch is used.
double loss_and_gradient(const Params& params, const Matrix& window, double target, LossKind kind, double delta,
                         std::span<double> grad);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 16;
  LossKind loss = LossKind::huber;
  double huber_delta = 1.0;
  std::uint64_t seed = 42;
  double clip_norm = 5.0;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct AdamState {
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double epsilon = 1e-8;

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// Called once per finished epoch with (epoch index from 1, mean training loss).
using EpochCallback = std::function<void(std::size_t, double)>;

struct TrainResult {
  Params params;
  AdamState optimizer;
  std::vector<double> loss_history;  // one mean training loss per epoch
};

/// Mini-batch BPTT with Adam and global-norm gradient clipping. Starts from `initial`.
/// Throws DataError on an empty dataset or a non-finite epoch loss.
TrainResult train(const WindowedDataset& dataset, Params initial, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Initializes from config.seed and trains.
TrainResult train(const WindowedDataset& dataset, const Shape& shape, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_parameter = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Central finite differences (step 1e-5) over every parameter against loss_and_gradient;
/// relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(const Params& params, const Matrix& window, double target, LossKind kind,
                           double delta = 1.0);

/// A trained forecaster together with everything needed to reproduce its inputs.
struct Model {
  Params params;
  NormParams norm;
  std::vector<Column> features{Column::close, Column::volume};
  std::size_t target_feature = 0;  // index into `features`
  std::size_t window_length = 8;
  std::size_t horizon = 1;
  // The readout predicts the change from the last input's target value rather than the level.
  bool residual = false;
  TrainConfig config;
  AdamState optimizer;

  friend bool operator==(const Model&, const Model&) = default;
};

/// Copy of `dataset` whose targets are relative to the last input row's `target_feature`, the
/// training set for a residual model.
WindowedDataset residual_targets(const WindowedDataset& dataset, std::size_t target_feature);

/// Mean loss of the model over a dataset without updating it.
double evaluate_loss(const Params& params, const WindowedDataset& dataset, LossKind kind, double delta);

/// One denormalized forecast per window position of `series` (stride 1), tagged with the
/// target bar's date and the date of the last input bar.
PredictionSeries predict_series(const Model& model, const OhlcvSeries& series);

/// Text checkpoint, doubles in hexadecimal so save/load is bit-exact.
std::string save_checkpoint(const Model& model);
Model load_checkpoint(std::string_view text);

}  // namespace hybridcast::convlstm
