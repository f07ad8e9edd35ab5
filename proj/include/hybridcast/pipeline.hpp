#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hybridcast/config.hpp"
#include "hybridcast/convlstm.hpp"
#include "hybridcast/fusion.hpp"
#include "hybridcast/metrics.hpp"
#include "hybridcast/news.hpp"
#include "hybridcast/sentiment.hpp"
#include "hybridcast/seqlen.hpp"
#include "hybridcast/synth.hpp"
#include "hybridcast/timeseries.hpp"

namespace hybridcast::pipeline {

struct PipelineConfig {
  // [data]
  std::string stock_csv;
  std::string news_feed;
  std::string fetch_url;
  std::string weights;  // empty: bundled registry
  std::string lexicon;  // empty: bundled lexicon
  std::string out_dir = "out";

  // [model]
  std::vector<Column> features{Column::close};  // synthetic volume carries no signal
  Column target = Column::close;
  std::size_t kernel = 3;
  std::size_t filters = 8;
  std::size_t window_length = 10;
  std::size_t horizon = 1;
  bool residual = true;  // forecast the change from the last observed value

  // [train]
  convlstm::TrainConfig train;

  // [search]
  seqlen::SearchConfig search;
  std::size_t search_epochs = 15;  // training budget per candidate length

  // [sentiment]
  sentiment::Granularity granularity = sentiment::Granularity::day;
  fusion::Alignment alignment = fusion::Alignment::origin;
  std::string scorer_command;  // empty: lexicon scorer

  // [eval]
  double test_fraction = 0.2;

  // [synth]
  synth::SynthConfig synth;

  std::uint64_t seed = 42;

  PipelineConfig();

  /// Applies `section.key` values; unknown keys are a ConfigError.
  void apply(const ConfigFile& file);
  /// Propagates `seed` into the train and synth sections.
  void set_seed(std::uint64_t s);
  void validate() const;

  convlstm::Shape shape() const { return {features.size(), filters, kernel}; }
  std::size_t target_feature() const;
};

using Logger = std::function<void(const std::string&)>;

/// Trains a forecaster on rows [0, train_rows) of `series`: normalization is fit on those rows
/// and only windows whose target lies inside them are used.
struct TrainedBaseline {
  convlstm::Model model;
  std::vector<double> loss_history;
  std::size_t train_windows = 0;
};
TrainedBaseline train_baseline(const OhlcvSeries& series, std::size_t train_rows, const PipelineConfig& config,
                               const Logger& log = {});

/// Performance for the window-length search: minus the validation Huber loss of a short, seeded
/// training run. The last 20% of rows [0, train_rows) are the validation targets.
double window_performance(const OhlcvSeries& series, std::size_t train_rows, std::size_t length,
                          const PipelineConfig& config);

seqlen::SearchResult find_window_length(const OhlcvSeries& series, std::size_t train_rows,
                                        const PipelineConfig& config, const Logger& log = {});

/// Number of rows kept for training when the last `test_fraction` is held out.
std::size_t training_rows(std::size_t rows, double test_fraction);

std::unique_ptr<sentiment::SentimentScorer> make_scorer(const PipelineConfig& config);
news::SourceWeightRegistry make_registry(const PipelineConfig& config);

/// Baseline vs hybrid on the last `test_fraction` of records; the surrogate is fit on the rest.
struct Evaluation {
  fusion::SurrogateModel surrogate;
  metrics::MetricReport baseline;
  metrics::MetricReport hybrid;
  std::size_t train_records = 0;
  std::size_t test_records = 0;
};
Evaluation evaluate_records(const std::vector<fusion::FusionRecord>& records, double test_fraction);
/// Index of the first test record.
std::size_t test_split(std::size_t records, double test_fraction);

struct EndToEndResult {
  synth::SynthOutput data;
  TrainedBaseline baseline;
  std::vector<sentiment::SentimentInterval> sentiment;
  PredictionSeries predictions;
  std::vector<fusion::FusionRecord> records;
  Evaluation evaluation;
  std::string table;
};

/// synth -> train Conv-LSTM -> score news -> fuse -> fit surrogate -> evaluate both.
/// The Conv-LSTM only sees bars dated before the first test record.
EndToEndResult run_end_to_end(const PipelineConfig& config, metrics::Format format = metrics::Format::text,
                              const Logger& log = {});

}  // namespace hybridcast::pipeline
