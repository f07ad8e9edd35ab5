#include "hybridcast/prediction.hpp"

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast {

std::string write_predictions(const PredictionSeries& series) {
  std::string out = "origin,date,lstm_pred\n";
  for (const Prediction& p : series) {
    out += format_date(p.origin) + ',' + format_date(p.target) + ',' + csv::shortest(p.value) + '\n';
  }
  return out;
}

PredictionSeries read_predictions(std::string_view csv_text) {
  const auto lines = csv::lines(csv_text);
  if (lines.empty() || lines.front() != "origin,date,lstm_pred") {
    throw DataError("predictions CSV must start with header 'origin,date,lstm_pred'");
  }
  PredictionSeries out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      const auto f = csv::split_record(lines[i]);
      if (f.size() != 3) throw DataError("expected 3 fields");
      out.push_back({parse_date(f[0]), parse_date(f[1]), csv::parse_double(f[2], "lstm_pred")});
    } catch (const DataError& e) {
      throw DataError("predictions line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hybridcast
