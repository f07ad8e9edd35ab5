#include "hybridcast/convlstm.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "hybridcast/errors.hpp"

namespace hybridcast::convlstm {

void Shape::validate() const {
  if (features == 0 || filters == 0) {
    throw ConfigError("Conv-LSTM needs at least one feature and one filter");
  }
  if (kernel == 0 || kernel % 2 == 0) {
    throw ConfigError("kernel width must be odd, got " + std::to_string(kernel));
  }
}

Params::Params(const Shape& shape) : shape_(shape) {
  shape.validate();
  values_.assign(count(shape), 0.0);
}

std::size_t Params::count(const Shape& shape) {
  const std::size_t h = shape.hidden();
  return kGateCount * (shape.filters * shape.kernel + h * h + h) + h + 1;
}

bool Params::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Params init_params(const Shape& shape, std::uint64_t seed) {
  Params p(shape);
  std::mt19937_64 rng(seed);
  const double gate_bound = 1.0 / std::sqrt(static_cast<double>(shape.kernel + shape.hidden()));
  std::uniform_real_distribution<double> gate_dist(-gate_bound, gate_bound);
  for (std::size_t g = 0; g < kGateCount; ++g) {
    const Gate gate = static_cast<Gate>(g);
    for (double& w : p.kernel(gate)) w = gate_dist(rng);
    for (double& w : p.recurrent(gate)) w = gate_dist(rng);
    std::fill(p.bias(gate).begin(), p.bias(gate).end(), gate == Gate::forget ? 1.0 : 0.0);
  }
  const double readout_bound = 1.0 / std::sqrt(static_cast<double>(shape.hidden()));
  std::uniform_real_distribution<double> readout_dist(-readout_bound, readout_bound);
  for (double& w : p.readout_weights()) w = readout_dist(rng);
  p.readout_bias() = 0.0;
  return p;
}

std::string_view loss_name(LossKind kind) { return kind == LossKind::huber ? "huber" : "mse"; }

LossKind parse_loss(std::string_view name) {
  if (name == "huber") return LossKind::huber;
  if (name == "mse") return LossKind::mse;
  throw ConfigError("unknown loss '" + std::string(name) + "' (expected huber or mse)");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be finite and non-negative");
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(huber_delta > 0.0)) throw ConfigError("huber delta must be > 0");
  if (!(clip_norm > 0.0)) throw ConfigError("gradient clip norm must be > 0");
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct StepCache {
  std::vector<double> x;
  std::vector<double> i, f, o, g;
  std::vector<double> c_prev, c, tanh_c, h_prev;
};

void check_input(std::span<const double> x, const Shape& shape) {
  if (x.size() != shape.features) {
    throw DataError("input has " + std::to_string(x.size()) + " features, cell expects " +
                    std::to_string(shape.features));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("non-finite input to Conv-LSTM cell");
  }
}

// pre = conv(K_g, x) + U_g h_prev + b_g
void preactivation(const Params& p, Gate gate, std::span<const double> x, std::span<const double> h_prev,
                   std::span<double> pre) {
  const Shape& s = p.shape();
  const std::size_t hidden = s.hidden();
  convolve(x, p.kernel(gate), s, pre);
  const auto u = p.recurrent(gate);
  const auto b = p.bias(gate);
  for (std::size_t r = 0; r < hidden; ++r) {
    const double* row = u.data() + r * hidden;
    double acc = pre[r] + b[r];
    for (std::size_t j = 0; j < hidden; ++j) acc += row[j] * h_prev[j];
    pre[r] = acc;
  }
}

// Fills `cache` with everything the backward pass needs and returns the next state in place.
void step(const Params& p, std::span<const double> x, std::vector<double>& h, std::vector<double>& c,
          StepCache& cache) {
  const std::size_t hidden = p.shape().hidden();
  cache.x.assign(x.begin(), x.end());
  cache.h_prev = h;
  cache.c_prev = c;
  cache.i.resize(hidden);
  cache.f.resize(hidden);
  cache.o.resize(hidden);
  cache.g.resize(hidden);
  cache.c.resize(hidden);
  cache.tanh_c.resize(hidden);
  preactivation(p, Gate::input, x, h, cache.i);
  preactivation(p, Gate::forget, x, h, cache.f);
  preactivation(p, Gate::output, x, h, cache.o);
  preactivation(p, Gate::candidate, x, h, cache.g);
  for (std::size_t u = 0; u < hidden; ++u) {
    cache.i[u] = sigmoid(cache.i[u]);
    cache.f[u] = sigmoid(cache.f[u]);
    cache.o[u] = sigmoid(cache.o[u]);
    cache.g[u] = std::tanh(cache.g[u]);
    cache.c[u] = cache.f[u] * cache.c_prev[u] + cache.i[u] * cache.g[u];
    cache.tanh_c[u] = std::tanh(cache.c[u]);
    c[u] = cache.c[u];
    h[u] = cache.o[u] * cache.tanh_c[u];
  }
}

double readout(const Params& p, std::span<const double> h) {
  const auto w = p.readout_weights();
  double y = p.readout_bias();
  for (std::size_t u = 0; u < h.size(); ++u) y += w[u] * h[u];
  return y;
}

void check_window(const Matrix& window, const Shape& shape) {
  if (window.rows() == 0) throw DataError("empty input window");
  if (window.cols() != shape.features) {
    throw DataError("window has " + std::to_string(window.cols()) + " features, model expects " +
                    std::to_string(shape.features));
  }
}

double run_window(const Params& p, const Matrix& window, std::vector<StepCache>& caches) {
  check_window(window, p.shape());
  const std::size_t hidden = p.shape().hidden();
  std::vector<double> h(hidden, 0.0);
  std::vector<double> c(hidden, 0.0);
  caches.resize(window.rows());
  for (std::size_t t = 0; t < window.rows(); ++t) {
    check_input(window.row(t), p.shape());
    step(p, window.row(t), h, c, caches[t]);
  }
  return readout(p, h);
}

double loss_derivative(double residual, LossKind kind, double delta) {
  // d loss / d prediction, residual = actual - prediction
  if (kind == LossKind::mse) return -2.0 * residual;
  if (std::abs(residual) <= delta) return -residual;
  return residual > 0.0 ? -delta : delta;
}

void backward(const Params& p, const std::vector<StepCache>& caches, double dpred, Params& grad) {
  const Shape& s = p.shape();
  const std::size_t hidden = s.hidden();
  const std::size_t half = s.kernel / 2;
  const std::size_t steps = caches.size();

  std::vector<double> dh(hidden, 0.0);
  std::vector<double> dc_next(hidden, 0.0);
  {
    const auto w = p.readout_weights();
    auto gw = grad.readout_weights();
    const auto& last = caches.back();
    for (std::size_t u = 0; u < hidden; ++u) {
      gw[u] += dpred * last.o[u] * last.tanh_c[u];
      dh[u] = dpred * w[u];
    }
    grad.readout_bias() += dpred;
  }

  std::array<std::vector<double>, kGateCount> da;
  for (auto& v : da) v.assign(hidden, 0.0);
  std::vector<double> dh_prev(hidden);

  for (std::size_t t = steps; t-- > 0;) {
    const StepCache& sc = caches[t];
    for (std::size_t u = 0; u < hidden; ++u) {
      const double tc = sc.tanh_c[u];
      const double d_o = dh[u] * tc;
      const double dc = dc_next[u] + dh[u] * sc.o[u] * (1.0 - tc * tc);
      const double d_i = dc * sc.g[u];
      const double d_g = dc * sc.i[u];
      const double d_f = dc * sc.c_prev[u];
      dc_next[u] = dc * sc.f[u];
      da[static_cast<std::size_t>(Gate::input)][u] = d_i * sc.i[u] * (1.0 - sc.i[u]);
      da[static_cast<std::size_t>(Gate::forget)][u] = d_f * sc.f[u] * (1.0 - sc.f[u]);
      da[static_cast<std::size_t>(Gate::output)][u] = d_o * sc.o[u] * (1.0 - sc.o[u]);
      da[static_cast<std::size_t>(Gate::candidate)][u] = d_g * (1.0 - sc.g[u] * sc.g[u]);
    }
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    for (std::size_t gi = 0; gi < kGateCount; ++gi) {
      const Gate gate = static_cast<Gate>(gi);
      const auto& a = da[gi];
      auto gb = grad.bias(gate);
      auto gu = grad.recurrent(gate);
      auto gk = grad.kernel(gate);
      const auto u_w = p.recurrent(gate);
      for (std::size_t r = 0; r < hidden; ++r) {
        const double ar = a[r];
        gb[r] += ar;
        double* grow = gu.data() + r * hidden;
        const double* wrow = u_w.data() + r * hidden;
        for (std::size_t j = 0; j < hidden; ++j) {
          grow[j] += ar * sc.h_prev[j];
          dh_prev[j] += wrow[j] * ar;
        }
      }
      for (std::size_t pos = 0; pos < s.features; ++pos) {
        for (std::size_t ch = 0; ch < s.filters; ++ch) {
          const double ar = a[pos * s.filters + ch];
          for (std::size_t j = 0; j < s.kernel; ++j) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(pos + j) - static_cast<std::ptrdiff_t>(half);
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(s.features)) continue;
            gk[ch * s.kernel + j] += ar * sc.x[static_cast<std::size_t>(src)];
          }
        }
      }
    }
    dh.swap(dh_prev);
  }
}

double accumulate(const Params& p, const Matrix& window, double target, LossKind kind, double delta,
                  Params& grad, std::vector<StepCache>& caches) {
  const double pred = run_window(p, window, caches);
  const double residual = target - pred;
  backward(p, caches, loss_derivative(residual, kind, delta), grad);
  return sample_loss(residual, kind, delta);
}

}  // namespace

void convolve(std::span<const double> x, std::span<const double> kernel, const Shape& shape,
              std::span<double> out) {
  const std::size_t half = shape.kernel / 2;
  for (std::size_t pos = 0; pos < shape.features; ++pos) {
    for (std::size_t ch = 0; ch < shape.filters; ++ch) {
      double acc = 0.0;
      for (std::size_t j = 0; j < shape.kernel; ++j) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(pos + j) - static_cast<std::ptrdiff_t>(half);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(shape.features)) continue;
        acc += kernel[ch * shape.kernel + j] * x[static_cast<std::size_t>(src)];
      }
      out[pos * shape.filters + ch] = acc;
    }
  }
}

CellState cell_forward(std::span<const double> x, const CellState& prev, const Params& params, GateValues* gates) {
  const Shape& s = params.shape();
  check_input(x, s);
  if (prev.h.size() != s.hidden() || prev.c.size() != s.hidden()) {
    throw DataError("cell state width does not match hidden width " + std::to_string(s.hidden()));
  }
  CellState next = prev;
  StepCache cache;
  step(params, x, next.h, next.c, cache);
  if (gates != nullptr) {
    gates->input = cache.i;
    gates->forget = cache.f;
    gates->output = cache.o;
    gates->candidate = cache.g;
  }
  return next;
}

double forward(const Matrix& window, const Params& params) {
  std::vector<StepCache> caches;
  return run_window(params, window, caches);
}

double sample_loss(double residual, LossKind kind, double delta) {
  if (kind == LossKind::mse) return residual * residual;
  const double a = std::abs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * (a - 0.5 * delta);
}

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.empty()) throw DataError("loss of an empty series");
  if (actual.size() != predicted.size()) {
    throw DataError("loss inputs differ in length: " + std::to_string(actual.size()) + " vs " +
                    std::to_string(predicted.size()));
  }
}

}  // namespace

double loss_mse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += sample_loss(actual[i] - predicted[i], LossKind::mse, 1.0);
  return sum / static_cast<double>(actual.size());
}

double loss_huber(std::span<const double> actual, std::span<const double> predicted, double delta) {
  if (!(delta > 0.0)) throw ConfigError("huber delta must be > 0");
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    sum += sample_loss(actual[i] - predicted[i], LossKind::huber, delta);
  }
  return sum / static_cast<double>(actual.size());
}

double loss_and_gradient(const Params& params, const Matrix& window, double target, LossKind kind, double delta,
                         std::span<double> grad) {
  if (grad.size() != params.size()) throw ConfigError("gradient buffer size does not match parameter count");
  Params g(params.shape());
  std::vector<StepCache> caches;
  const double loss = accumulate(params, window, target, kind, delta, g, caches);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.values()[i];
  return loss;
}

double evaluate_loss(const Params& params, const WindowedDataset& dataset, LossKind kind, double delta) {
  if (dataset.empty()) throw DataError("empty dataset");
  std::vector<StepCache> caches;
  double sum = 0.0;
  for (const Window& w : dataset.windows) {
    sum += sample_loss(w.target - run_window(params, w.input, caches), kind, delta);
  }
  return sum / static_cast<double>(dataset.size());
}

TrainResult train(const WindowedDataset& dataset, Params initial, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.empty()) throw DataError("cannot train on an empty dataset");
  if (!initial.all_finite()) throw DataError("initial parameters are not finite");

  TrainResult result;
  result.params = std::move(initial);
  Params& params = result.params;
  const std::size_t n_params = params.size();
  AdamState& adam = result.optimizer;
  adam.m.assign(n_params, 0.0);
  adam.v.assign(n_params, 0.0);

  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Params grad(params.shape());
  std::vector<StepCache> caches;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::fill(grad.values().begin(), grad.values().end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const Window& w = dataset.windows[order[k]];
        epoch_loss += accumulate(params, w.input, w.target, config.loss, config.huber_delta, grad, caches);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      double norm_sq = 0.0;
      for (double& g : grad.values()) {
        g *= scale;
        norm_sq += g * g;
      }
      const double norm = std::sqrt(norm_sq);
      if (norm > config.clip_norm) {
        const double shrink = config.clip_norm / norm;
        for (double& g : grad.values()) g *= shrink;
      }
      ++adam.step;
      const double bias1 = 1.0 - std::pow(AdamState::beta1, static_cast<double>(adam.step));
      const double bias2 = 1.0 - std::pow(AdamState::beta2, static_cast<double>(adam.step));
      auto theta = params.values();
      const auto g = grad.values();
      for (std::size_t i = 0; i < n_params; ++i) {
        adam.m[i] = AdamState::beta1 * adam.m[i] + (1.0 - AdamState::beta1) * g[i];
        adam.v[i] = AdamState::beta2 * adam.v[i] + (1.0 - AdamState::beta2) * g[i] * g[i];
        const double m_hat = adam.m[i] / bias1;
        const double v_hat = adam.v[i] / bias2;
        theta[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + AdamState::epsilon);
      }
    }
    const double mean_loss = epoch_loss / static_cast<double>(dataset.size());
    if (!std::isfinite(mean_loss)) {
      throw DataError("non-finite training loss at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(mean_loss);
    if (on_epoch) on_epoch(epoch, mean_loss);
  }
  return result;
}

TrainResult train(const WindowedDataset& dataset, const Shape& shape, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  return train(dataset, init_params(shape, config.seed), config, on_epoch);
}

GradCheckReport grad_check(const Params& params, const Matrix& window, double target, LossKind kind, double delta) {
  constexpr double kStep = 1e-5;
  std::vector<double> analytic(params.size(), 0.0);
  loss_and_gradient(params, window, target, kind, delta, analytic);

  GradCheckReport report;
  Params probe = params;
  std::vector<StepCache> caches;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double original = probe.values()[i];
    probe.values()[i] = original + kStep;
    const double up = sample_loss(target - run_window(probe, window, caches), kind, delta);
    probe.values()[i] = original - kStep;
    const double down = sample_loss(target - run_window(probe, window, caches), kind, delta);
    probe.values()[i] = original;
    const double numeric = (up - down) / (2.0 * kStep);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
    const double rel = std::abs(analytic[i] - numeric) / denom;
    if (i == 0 || rel > report.max_relative_error) {
      report = {rel, i, analytic[i], numeric};
    }
  }
  return report;
}

WindowedDataset residual_targets(const WindowedDataset& dataset, std::size_t target_feature) {
  WindowedDataset out = dataset;
  for (Window& w : out.windows) {
    if (target_feature >= w.input.cols()) throw ConfigError("target feature index out of range");
    w.target -= w.input(w.input.rows() - 1, target_feature);
  }
  return out;
}

PredictionSeries predict_series(const Model& model, const OhlcvSeries& series) {
  if (model.target_feature >= model.features.size()) {
    throw ConfigError("model target feature index out of range");
  }
  const Matrix raw = feature_matrix(series, model.features);
  const Matrix normalized = zscore_apply(raw, model.norm);
  if (window_count(series.size(), model.window_length, model.horizon, 1) == 0) {
    throw DataError("series too short: " + std::to_string(series.size()) + " rows for window length " +
                    std::to_string(model.window_length));
  }
  const WindowedDataset ds = make_windows(normalized, model.window_length, model.horizon, 1, model.target_feature);
  PredictionSeries out;
  out.reserve(ds.size());
  std::vector<StepCache> caches;
  for (const Window& w : ds.windows) {
    double z = run_window(model.params, w.input, caches);
    if (model.residual) z += w.input(w.input.rows() - 1, model.target_feature);
    out.push_back({series[w.last_input_index()].date, series[w.target_index].date,
                   model.norm.invert(z, model.target_feature)});
  }
  return out;
}

namespace {

constexpr std::string_view kCheckpointMagic = "hybridcast-convlstm";
constexpr int kCheckpointVersion = 1;

std::string hex(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  (void)ec;
  return std::string(buf, ptr);
}

double unhex(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::hex);
  if (ec != std::errc{} || ptr != last) throw DataError("checkpoint: bad number '" + token + "'");
  return v;
}

void write_values(std::ostringstream& out, std::string_view key, std::span<const double> values) {
  out << key << ' ' << values.size();
  for (double v : values) out << ' ' << hex(v);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : in_(std::string(text)) {}

  void expect(std::string_view key) {
    std::string token;
    if (!(in_ >> token) || token != key) {
      throw DataError("checkpoint: expected '" + std::string(key) + "'");
    }
  }
  std::string word() {
    std::string token;
    if (!(in_ >> token)) throw DataError("checkpoint: unexpected end of file");
    return token;
  }
  std::uint64_t count() {
    const std::string token = word();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw DataError("checkpoint: bad integer '" + token + "'");
    }
    return v;
  }
  double number() { return unhex(word()); }
  std::vector<double> values(std::string_view key) {
    expect(key);
    std::vector<double> v(count());
    for (double& x : v) x = number();
    return v;
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::string save_checkpoint(const Model& model) {
  std::ostringstream out;
  const Shape& s = model.params.shape();
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "shape " << s.features << ' ' << s.filters << ' ' << s.kernel << '\n';
  out << "features " << model.features.size();
  for (Column c : model.features) out << ' ' << column_name(c);
  out << '\n';
  out << "target_feature " << model.target_feature << '\n';
  out << "window_length " << model.window_length << '\n';
  out << "horizon " << model.horizon << '\n';
  out << "residual " << (model.residual ? 1 : 0) << '\n';
  const TrainConfig& c = model.config;
  out << "train " << hex(c.learning_rate) << ' ' << c.epochs << ' ' << c.batch_size << ' ' << loss_name(c.loss)
      << ' ' << hex(c.huber_delta) << ' ' << c.seed << ' ' << hex(c.clip_norm) << '\n';
  write_values(out, "norm_mu", model.norm.mu);
  write_values(out, "norm_sigma", model.norm.sigma);
  write_values(out, "params", model.params.values());
  out << "adam_step " << model.optimizer.step << '\n';
  write_values(out, "adam_m", model.optimizer.m);
  write_values(out, "adam_v", model.optimizer.v);
  out << "end\n";
  return out.str();
}

Model load_checkpoint(std::string_view text) {
  Reader in(text);
  in.expect(kCheckpointMagic);
  const std::uint64_t version = in.count();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  Model m;
  in.expect("shape");
  Shape s;
  s.features = in.count();
  s.filters = in.count();
  s.kernel = in.count();
  s.validate();
  in.expect("features");
  m.features.resize(in.count());
  for (Column& col : m.features) col = parse_column(in.word());
  if (m.features.size() != s.features) throw DataError("checkpoint: feature list does not match shape");
  in.expect("target_feature");
  m.target_feature = in.count();
  in.expect("window_length");
  m.window_length = in.count();
  in.expect("horizon");
  m.horizon = in.count();
  in.expect("residual");
  const std::uint64_t residual = in.count();
  if (residual > 1) throw DataError("checkpoint: residual flag must be 0 or 1");
  m.residual = residual == 1;
  in.expect("train");
  m.config.learning_rate = in.number();
  m.config.epochs = in.count();
  m.config.batch_size = in.count();
  m.config.loss = parse_loss(in.word());
  m.config.huber_delta = in.number();
  m.config.seed = in.count();
  m.config.clip_norm = in.number();
  m.norm.mu = in.values("norm_mu");
  m.norm.sigma = in.values("norm_sigma");
  if (m.norm.mu.size() != s.features || m.norm.sigma.size() != s.features) {
    throw DataError("checkpoint: normalization width does not match shape");
  }
  m.params = Params(s);
  const std::vector<double> values = in.values("params");
  if (values.size() != m.params.size()) throw DataError("checkpoint: parameter count does not match shape");
  std::copy(values.begin(), values.end(), m.params.values().begin());
  in.expect("adam_step");
  m.optimizer.step = in.count();
  m.optimizer.m = in.values("adam_m");
  m.optimizer.v = in.values("adam_v");
  in.expect("end");
  if (m.target_feature >= m.features.size()) throw DataError("checkpoint: target feature out of range");
  return m;
}

}  // namespace hybridcast::convlstm
