#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/calendar.hpp"
#include "hybridcast/matrix.hpp"

namespace hybridcast {

struct OhlcvRow {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double adj_close = 0.0;
  double volume = 0.0;

  friend bool operator==(const OhlcvRow&, const OhlcvRow&) = default;
};

/// Daily bars with strictly increasing dates, positive prices and non-negative volume.
class OhlcvSeries {
 public:
  OhlcvSeries() = default;
  /// Sorts by date and validates; throws DataError on duplicates or bad values.
  explicit OhlcvSeries(std::vector<OhlcvRow> rows);

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const OhlcvRow& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<OhlcvRow>& rows() const { return rows_; }

  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

  /// Index of the row with this date, or size() when absent.
  std::size_t find(Date date) const;

 private:
  std::vector<OhlcvRow> rows_;
};

enum class Column { open, high, low, close, adj_close, volume };

std::string_view column_name(Column c);
/// Accepts the CSV header spellings (`close`, `adj_close`, ...).
Column parse_column(std::string_view name);

inline constexpr std::string_view kOhlcvHeader = "date,open,high,low,close,adj_close,volume";

OhlcvSeries load_ohlcv(std::string_view csv_text);
std::string write_ohlcv(const OhlcvSeries& series);

/// Extracts the selected columns as an N x F matrix, in the given order.
Matrix feature_matrix(const OhlcvSeries& series, const std::vector<Column>& columns);

struct NormParams {
  std::vector<double> mu;
  std::vector<double> sigma;

  std::size_t features() const { return mu.size(); }
  double apply(double x, std::size_t feature) const { return (x - mu[feature]) / sigma[feature]; }
  double invert(double z, std::size_t feature) const { return z * sigma[feature] + mu[feature]; }

  friend bool operator==(const NormParams&, const NormParams&) = default;
};

/// Per-feature mean and population (1/n) standard deviation.
NormParams zscore_fit(const Matrix& values);
Matrix zscore_apply(const Matrix& values, const NormParams& params);
Matrix zscore_invert(const Matrix& normalized, const NormParams& params);

struct Window {
  Matrix input;              // L x F
  double target = 0.0;       // target column at target_index
  std::size_t first_index = 0;
  std::size_t target_index = 0;

  std::size_t last_input_index() const { return first_index + input.rows() - 1; }
};

struct WindowedDataset {
  std::vector<Window> windows;
  std::size_t window_length = 0;
  std::size_t horizon = 1;
  std::size_t stride = 1;
  std::size_t features = 0;

  std::size_t size() const { return windows.size(); }
  bool empty() const { return windows.empty(); }
};

/// Number of windows make_windows produces; 0 when the series is too short.
std::size_t window_count(std::size_t rows, std::size_t length, std::size_t horizon, std::size_t stride);

/// Slides a length-L window over `series` (rows = time). Window i starts at row i*stride and
/// targets `series(start + L - 1 + horizon, target_column)`.
WindowedDataset make_windows(const Matrix& series, std::size_t length, std::size_t horizon, std::size_t stride,
                             std::size_t target_column = 0);

}  // namespace hybridcast
