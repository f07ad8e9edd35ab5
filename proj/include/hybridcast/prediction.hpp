#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/calendar.hpp"

namespace hybridcast {

/// One naive forecast: issued with data up to `origin`, for the bar dated `target`.
struct Prediction {
  Date origin;
  Date target;
  double value = 0.0;  // denormalized price

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

using PredictionSeries = std::vector<Prediction>;

/// CSV `origin,date,lstm_pred`; values in shortest round-trip form.
std::string write_predictions(const PredictionSeries& series);
PredictionSeries read_predictions(std::string_view csv_text);

}  // namespace hybridcast
