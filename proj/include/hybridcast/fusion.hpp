#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/calendar.hpp"
#include "hybridcast/prediction.hpp"
#include "hybridcast/sentiment.hpp"
#include "hybridcast/timeseries.hpp"

namespace hybridcast::fusion {

struct FusionRecord {
  Date date;                     // target bar of the forecast
  double lstm_prediction = 0.0;  // price units
  double w_cs = 0.0;             // [-1, 1]
  std::optional<double> actual;  // close on `date`, when known

  friend bool operator==(const FusionRecord&, const FusionRecord&) = default;
};

/// Which date of a forecast is matched against the sentiment buckets.
enum class Alignment {
  target,  // the day being forecast
  origin,  // the day the forecast is issued (last input bar); uses only news already published
};
Alignment parse_alignment(std::string_view text);
std::string_view alignment_name(Alignment a);

/// Inner join of daily forecasts and daily sentiment buckets. Forecasts outside the news coverage
/// are dropped, so the kept span is the overlap. Throws DataError when nothing overlaps, when the
/// buckets are not whole UTC days, or when a forecast date repeats.
std::vector<FusionRecord> time_map(const PredictionSeries& predictions,
                                   std::span<const sentiment::SentimentInterval> sentiments,
                                   const OhlcvSeries& actuals, Alignment alignment = Alignment::target);

/// One `{"text": "LSTM prediction P and sentiment score S", "target": "actual target V"}` line per
/// record, numbers in 4-decimal fixed point, LF after every line.
std::string emit_corpus(std::span<const FusionRecord> records);

struct CorpusValues {
  double prediction = 0.0;
  double sentiment = 0.0;
  double target = 0.0;
};

/// Inverse of one emit_corpus line.
CorpusValues parse_corpus_line(std::string_view line);

/// Stand-in for sequence-to-sequence fine-tuning: actual ~ a * prediction + b * w_cs + c.
struct SurrogateModel {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double residual_mse = 0.0;
  std::size_t n = 0;

  friend bool operator==(const SurrogateModel&, const SurrogateModel&) = default;
};

/// Ordinary least squares via the (centered) normal equations. Needs n >= 3 records with actuals
/// and a full-rank design [prediction, w_cs, 1]; otherwise DataError naming the bad column.
SurrogateModel fit_surrogate(std::span<const FusionRecord> records);

inline double surrogate_predict(const SurrogateModel& m, double prediction, double w_cs) {
  return m.a * prediction + m.b * w_cs + m.c;
}

std::string save_surrogate(const SurrogateModel& model);
SurrogateModel load_surrogate(std::string_view text);

/// CSV `date,lstm_pred,w_cs,actual`; an unknown actual is an empty field.
std::string write_records(std::span<const FusionRecord> records);
std::vector<FusionRecord> read_records(std::string_view csv_text);

}  // namespace hybridcast::fusion
