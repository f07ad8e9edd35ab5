#include "hybridcast/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hybridcast/csv.hpp"
#include "hybridcast/defaults.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::pipeline {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config " + key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return csv::parse_double(v, key);
  } catch (const DataError&) {
    throw ConfigError("config " + key + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config " + key + ": expected true or false, got '" + v + "'");
}

std::vector<Column> to_columns(const std::string& v) {
  std::vector<Column> cols;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t end = v.find(',', start);
    if (end == std::string::npos) end = v.size();
    std::string name = v.substr(start, end - start);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (!name.empty()) cols.push_back(parse_column(name));
    start = end + 1;
  }
  return cols;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  train.epochs = 150;
  train.batch_size = 16;
  set_seed(seed);
}

void PipelineConfig::set_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
  synth.seed = s;
}

void PipelineConfig::apply(const ConfigFile& file) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"data.stock", [&](auto&, auto& v) { stock_csv = v; }},
      {"data.news", [&](auto&, auto& v) { news_feed = v; }},
      {"data.fetch_url", [&](auto&, auto& v) { fetch_url = v; }},
      {"data.weights", [&](auto&, auto& v) { weights = v; }},
      {"data.lexicon", [&](auto&, auto& v) { lexicon = v; }},
      {"data.out_dir", [&](auto&, auto& v) { out_dir = v; }},
      {"model.features", [&](auto&, auto& v) { features = to_columns(v); }},
      {"model.target", [&](auto&, auto& v) { target = parse_column(v); }},
      {"model.kernel", [&](auto& k, auto& v) { kernel = to_u64(k, v); }},
      {"model.filters", [&](auto& k, auto& v) { filters = to_u64(k, v); }},
      {"model.window_length", [&](auto& k, auto& v) { window_length = to_u64(k, v); }},
      {"model.horizon", [&](auto& k, auto& v) { horizon = to_u64(k, v); }},
      {"model.residual", [&](auto& k, auto& v) { residual = to_bool(k, v); }},
      {"train.learning_rate", [&](auto& k, auto& v) { train.learning_rate = to_double(k, v); }},
      {"train.epochs", [&](auto& k, auto& v) { train.epochs = to_u64(k, v); }},
      {"train.batch_size", [&](auto& k, auto& v) { train.batch_size = to_u64(k, v); }},
      {"train.loss", [&](auto&, auto& v) { train.loss = convlstm::parse_loss(v); }},
      {"train.huber_delta", [&](auto& k, auto& v) { train.huber_delta = to_double(k, v); }},
      {"train.clip_norm", [&](auto& k, auto& v) { train.clip_norm = to_double(k, v); }},
      {"search.initial_length", [&](auto& k, auto& v) { search.initial_length = static_cast<int>(to_u64(k, v)); }},
      {"search.initial_step", [&](auto& k, auto& v) { search.initial_step = to_double(k, v); }},
      {"search.threshold", [&](auto& k, auto& v) { search.threshold = to_double(k, v); }},
      {"search.reduction", [&](auto& k, auto& v) { search.reduction = to_double(k, v); }},
      {"search.min_step", [&](auto& k, auto& v) { search.min_step = to_double(k, v); }},
      {"search.min_length", [&](auto& k, auto& v) { search.min_length = static_cast<int>(to_u64(k, v)); }},
      {"search.max_length", [&](auto& k, auto& v) { search.max_length = static_cast<int>(to_u64(k, v)); }},
      {"search.max_iterations", [&](auto& k, auto& v) { search.max_iterations = to_u64(k, v); }},
      {"search.epochs", [&](auto& k, auto& v) { search_epochs = to_u64(k, v); }},
      {"sentiment.granularity", [&](auto&, auto& v) { granularity = sentiment::parse_granularity(v); }},
      {"sentiment.alignment", [&](auto&, auto& v) { alignment = fusion::parse_alignment(v); }},
      {"sentiment.scorer_command", [&](auto&, auto& v) { scorer_command = v; }},
      {"eval.test_fraction", [&](auto& k, auto& v) { test_fraction = to_double(k, v); }},
      {"synth.days", [&](auto& k, auto& v) { synth.days = to_u64(k, v); }},
      {"synth.base_price", [&](auto& k, auto& v) { synth.base_price = to_double(k, v); }},
      {"synth.volatility", [&](auto& k, auto& v) { synth.daily_volatility = to_double(k, v); }},
      {"synth.jump_probability", [&](auto& k, auto& v) { synth.jump_probability = to_double(k, v); }},
      {"synth.jump_magnitude", [&](auto& k, auto& v) { synth.jump_magnitude = to_double(k, v); }},
      {"synth.min_articles", [&](auto& k, auto& v) { synth.min_articles = to_u64(k, v); }},
      {"synth.max_articles", [&](auto& k, auto& v) { synth.max_articles = to_u64(k, v); }},
      {"synth.contrary_probability", [&](auto& k, auto& v) { synth.contrary_probability = to_double(k, v); }},
      {"synth.filler_noise", [&](auto& k, auto& v) { synth.filler_noise = to_double(k, v); }},
      {"seed", [&](auto& k, auto& v) { set_seed(to_u64(k, v)); }},
      {"general.seed", [&](auto& k, auto& v) { set_seed(to_u64(k, v)); }},
  };
  // Seed first so that explicit per-section values are not clobbered by it.
  for (const char* key : {"seed", "general.seed"}) {
    if (const std::string* v = file.get(key)) setters.at(key)(key, *v);
  }
  for (const auto& [key, value] : file.values()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    if (key == "seed" || key == "general.seed") continue;
    it->second(key, value);
  }
}

std::size_t PipelineConfig::target_feature() const {
  auto it = std::find(features.begin(), features.end(), target);
  if (it == features.end()) {
    throw ConfigError("target column " + std::string(column_name(target)) + " is not among the model features");
  }
  return static_cast<std::size_t>(it - features.begin());
}

void PipelineConfig::validate() const {
  shape().validate();
  (void)target_feature();
  if (window_length < 1 || horizon < 1) throw ConfigError("window length and horizon must be >= 1");
  train.validate();
  search.validate();
  if (search_epochs < 1) throw ConfigError("search epochs must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test fraction must lie in (0, 1)");
}

std::size_t training_rows(std::size_t rows, double test_fraction) {
  const auto held_out = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows)));
  return rows - std::min(rows, held_out);
}

std::size_t test_split(std::size_t records, double test_fraction) {
  const auto n_test = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(records))));
  return records - std::min(records, n_test);
}

namespace {

// Normalized features of the whole series, with statistics from rows [0, fit_rows).
std::pair<Matrix, NormParams> normalized_features(const OhlcvSeries& series, std::size_t fit_rows,
                                                  const PipelineConfig& config) {
  const Matrix raw = feature_matrix(series, config.features);
  const NormParams norm = zscore_fit(raw.slice_rows(0, fit_rows));
  return {zscore_apply(raw, norm), norm};
}

WindowedDataset windows_with_targets_in(const Matrix& normalized, std::size_t length, std::size_t begin,
                                        std::size_t end, const PipelineConfig& config) {
  WindowedDataset all = make_windows(normalized.slice_rows(0, end), length, config.horizon, 1,
                                     config.target_feature());
  std::erase_if(all.windows, [&](const Window& w) { return w.target_index < begin; });
  return config.residual ? convlstm::residual_targets(all, config.target_feature()) : all;
}

}  // namespace

TrainedBaseline train_baseline(const OhlcvSeries& series, std::size_t train_rows, const PipelineConfig& config,
                               const Logger& log) {
  config.validate();
  if (train_rows > series.size()) throw ConfigError("training rows exceed series length");
  auto [normalized, norm] = normalized_features(series, train_rows, config);
  const WindowedDataset ds = windows_with_targets_in(normalized, config.window_length, 0, train_rows, config);

  TrainedBaseline out;
  out.train_windows = ds.size();
  convlstm::EpochCallback on_epoch;
  if (log) {
    const std::size_t every = std::max<std::size_t>(1, config.train.epochs / 10);
    on_epoch = [&](std::size_t epoch, double loss) {
      if (epoch % every == 0 || epoch == config.train.epochs) {
        log("epoch " + std::to_string(epoch) + "/" + std::to_string(config.train.epochs) + " loss " +
            csv::fixed(loss, 6));
      }
    };
  }
  convlstm::TrainResult trained = convlstm::train(ds, config.shape(), config.train, on_epoch);
  out.model.params = std::move(trained.params);
  out.model.optimizer = std::move(trained.optimizer);
  out.model.norm = norm;
  out.model.features = config.features;
  out.model.target_feature = config.target_feature();
  out.model.window_length = config.window_length;
  out.model.horizon = config.horizon;
  out.model.residual = config.residual;
  out.model.config = config.train;
  out.loss_history = std::move(trained.loss_history);
  return out;
}

double window_performance(const OhlcvSeries& series, std::size_t train_rows, std::size_t length,
                          const PipelineConfig& config) {
  const std::size_t fit_rows = training_rows(train_rows, 0.2);
  auto [normalized, norm] = normalized_features(series, fit_rows, config);
  const WindowedDataset fit = windows_with_targets_in(normalized, length, 0, fit_rows, config);
  const WindowedDataset validation = windows_with_targets_in(normalized, length, fit_rows, train_rows, config);
  if (validation.empty()) throw DataError("no validation windows for L=" + std::to_string(length));
  convlstm::TrainConfig tc = config.train;
  tc.epochs = config.search_epochs;
  const auto trained = convlstm::train(fit, config.shape(), tc);
  return -convlstm::evaluate_loss(trained.params, validation, convlstm::LossKind::huber, config.train.huber_delta);
}

seqlen::SearchResult find_window_length(const OhlcvSeries& series, std::size_t train_rows,
                                        const PipelineConfig& config, const Logger& log) {
  config.validate();
  seqlen::SearchConfig sc = config.search;
  // Longest window that still leaves validation targets with full context.
  const std::size_t fit_rows = training_rows(train_rows, 0.2);
  const int longest = static_cast<int>(fit_rows) - static_cast<int>(config.horizon) - 1;
  if (longest < sc.min_length) throw DataError("series too short for a window-length search");
  sc.max_length = std::min(sc.max_length, longest);
  sc.initial_length = std::clamp(sc.initial_length, sc.min_length, sc.max_length);
  return seqlen::search_optimal_length(
      [&](int length) {
        const double p = window_performance(series, train_rows, static_cast<std::size_t>(length), config);
        if (log) log("L=" + std::to_string(length) + " performance " + csv::fixed(p, 6));
        return p;
      },
      sc);
}

std::unique_ptr<sentiment::SentimentScorer> make_scorer(const PipelineConfig& config) {
  if (!config.scorer_command.empty()) {
    return std::make_unique<sentiment::ProcessScorer>(config.scorer_command);
  }
  const std::string text = config.lexicon.empty() ? std::string(default_lexicon_text()) : read_file(config.lexicon);
  return std::make_unique<sentiment::LexiconScorer>(sentiment::load_lexicon(text));
}

news::SourceWeightRegistry make_registry(const PipelineConfig& config) {
  const std::string text = config.weights.empty() ? std::string(default_weights_text()) : read_file(config.weights);
  return news::load_registry(text);
}

Evaluation evaluate_records(const std::vector<fusion::FusionRecord>& records, double test_fraction) {
  std::vector<fusion::FusionRecord> usable;
  std::copy_if(records.begin(), records.end(), std::back_inserter(usable),
               [](const fusion::FusionRecord& r) { return r.actual.has_value(); });
  const std::size_t split = test_split(usable.size(), test_fraction);
  if (split < 3 || split >= usable.size()) {
    throw DataError("not enough records to split into surrogate-fit and test sets (" +
                    std::to_string(usable.size()) + ")");
  }
  Evaluation ev;
  ev.train_records = split;
  ev.test_records = usable.size() - split;
  ev.surrogate = fusion::fit_surrogate(std::span(usable).first(split));
  std::vector<double> actual, baseline, hybrid;
  for (std::size_t i = split; i < usable.size(); ++i) {
    const auto& r = usable[i];
    actual.push_back(*r.actual);
    baseline.push_back(r.lstm_prediction);
    hybrid.push_back(fusion::surrogate_predict(ev.surrogate, r.lstm_prediction, r.w_cs));
  }
  ev.baseline = metrics::compute_metrics(actual, baseline);
  ev.hybrid = metrics::compute_metrics(actual, hybrid);
  return ev;
}

EndToEndResult run_end_to_end(const PipelineConfig& config, metrics::Format format, const Logger& log) {
  config.validate();
  if (config.granularity != sentiment::Granularity::day) {
    throw ConfigError("the end-to-end run fuses daily forecasts; use day granularity");
  }
  EndToEndResult out;
  out.data = synth::generate(config.synth);
  const OhlcvSeries& series = out.data.series;
  if (log) {
    log("synth: " + std::to_string(series.size()) + " days, " + std::to_string(out.data.events.size()) + " events");
  }

  const news::ParsedFeed feed = news::parse_feed(out.data.feed_json);
  const auto scorer = make_scorer(config);
  const auto registry = make_registry(config);
  const auto scored = sentiment::score_articles(feed.articles, *scorer, registry);
  out.sentiment = sentiment::bucket_by_interval(scored, config.granularity);

  // The join only depends on dates, so the record layout (and the test cut-off) is known
  // before any model is trained.
  std::set<Date> news_days;
  for (const auto& iv : out.sentiment) news_days.insert(day_of(iv.start));
  std::vector<Date> record_dates;
  const std::size_t positions = window_count(series.size(), config.window_length, config.horizon, 1);
  for (std::size_t i = 0; i < positions; ++i) {
    const std::size_t origin = i + config.window_length - 1;
    const std::size_t target = origin + config.horizon;
    const Date key = config.alignment == fusion::Alignment::target ? series[target].date : series[origin].date;
    if (news_days.count(key) != 0) record_dates.push_back(series[target].date);
  }
  const std::size_t split = test_split(record_dates.size(), config.test_fraction);
  if (split >= record_dates.size()) throw DataError("no records left for testing");
  const std::size_t train_rows = series.find(record_dates[split]);

  out.baseline = train_baseline(series, train_rows, config, log);
  out.predictions = convlstm::predict_series(out.baseline.model, series);
  out.records = fusion::time_map(out.predictions, out.sentiment, series, config.alignment);
  out.evaluation = evaluate_records(out.records, config.test_fraction);
  out.table = metrics::compare_report(out.evaluation.baseline, out.evaluation.hybrid, format);
  return out;
}

}  // namespace hybridcast::pipeline
