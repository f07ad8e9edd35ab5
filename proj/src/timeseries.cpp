#include "hybridcast/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast {

OhlcvSeries::OhlcvSeries(std::vector<OhlcvRow> rows) : rows_(std::move(rows)) {
  std::stable_sort(rows_.begin(), rows_.end(), [](const OhlcvRow& a, const OhlcvRow& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const OhlcvRow& r = rows_[i];
    if (i > 0 && rows_[i - 1].date == r.date) {
      throw DataError("duplicate date " + format_date(r.date));
    }
    for (double price : {r.open, r.high, r.low, r.close, r.adj_close}) {
      if (!(price > 0.0) || !std::isfinite(price)) {
        throw DataError("non-positive price on " + format_date(r.date));
      }
    }
    if (!(r.volume >= 0.0) || !std::isfinite(r.volume)) {
      throw DataError("negative volume on " + format_date(r.date));
    }
  }
}

std::size_t OhlcvSeries::find(Date date) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), date,
                             [](const OhlcvRow& r, Date d) { return r.date < d; });
  if (it == rows_.end() || it->date != date) return rows_.size();
  return static_cast<std::size_t>(it - rows_.begin());
}

std::string_view column_name(Column c) {
  switch (c) {
    case Column::open: return "open";
    case Column::high: return "high";
    case Column::low: return "low";
    case Column::close: return "close";
    case Column::adj_close: return "adj_close";
    case Column::volume: return "volume";
  }
  return "?";
}

Column parse_column(std::string_view name) {
  for (Column c : {Column::open, Column::high, Column::low, Column::close, Column::adj_close, Column::volume}) {
    if (column_name(c) == name) return c;
  }
  throw ConfigError("unknown column '" + std::string(name) + "'");
}

namespace {

double column_value(const OhlcvRow& r, Column c) {
  switch (c) {
    case Column::open: return r.open;
    case Column::high: return r.high;
    case Column::low: return r.low;
    case Column::close: return r.close;
    case Column::adj_close: return r.adj_close;
    case Column::volume: return r.volume;
  }
  return 0.0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

OhlcvSeries load_ohlcv(std::string_view csv_text) {
  const auto lines = csv::lines(csv_text);
  std::size_t header_at = 0;
  while (header_at < lines.size() && trim(lines[header_at]).empty()) ++header_at;
  if (header_at == lines.size()) {
    throw DataError("empty CSV: missing header");
  }
  std::string_view header = trim(lines[header_at]);
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != kOhlcvHeader) {
    throw DataError("line " + std::to_string(header_at + 1) + ": expected header '" + std::string(kOhlcvHeader) +
                    "'");
  }
  std::vector<OhlcvRow> rows;
  for (std::size_t i = header_at + 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    try {
      const auto fields = csv::split_record(line);
      if (fields.size() != 7) {
        throw DataError("expected 7 fields, got " + std::to_string(fields.size()));
      }
      OhlcvRow row;
      row.date = parse_date(trim(fields[0]));
      row.open = csv::parse_double(fields[1], "open");
      row.high = csv::parse_double(fields[2], "high");
      row.low = csv::parse_double(fields[3], "low");
      row.close = csv::parse_double(fields[4], "close");
      row.adj_close = csv::parse_double(fields[5], "adj_close");
      row.volume = csv::parse_double(fields[6], "volume");
      rows.push_back(row);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  if (rows.empty()) {
    throw DataError("no data rows");
  }
  return OhlcvSeries(std::move(rows));
}

std::string write_ohlcv(const OhlcvSeries& series) {
  std::string out(kOhlcvHeader);
  out += '\n';
  for (const OhlcvRow& r : series) {
    out += format_date(r.date);
    for (double v : {r.open, r.high, r.low, r.close, r.adj_close}) {
      out += ',';
      out += csv::fixed(v, 4);
    }
    out += ',';
    out += csv::fixed(r.volume, 0);
    out += '\n';
  }
  return out;
}

Matrix feature_matrix(const OhlcvSeries& series, const std::vector<Column>& columns) {
  if (columns.empty()) {
    throw ConfigError("feature column list is empty");
  }
  Matrix m(series.size(), columns.size());
  for (std::size_t r = 0; r < series.size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      m(r, c) = column_value(series[r], columns[c]);
    }
  }
  return m;
}

NormParams zscore_fit(const Matrix& values) {
  if (values.rows() < 2) {
    throw DataError("z-score fit needs at least 2 samples, got " + std::to_string(values.rows()));
  }
  const std::size_t n = values.rows();
  NormParams p;
  p.mu.assign(values.cols(), 0.0);
  p.sigma.assign(values.cols(), 0.0);
  for (std::size_t c = 0; c < values.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += values(r, c);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = values(r, c) - mean;
      ss += d * d;
    }
    const double sigma = std::sqrt(ss / static_cast<double>(n));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw DataError("constant feature " + std::to_string(c) + " cannot be z-score normalized");
    }
    p.mu[c] = mean;
    p.sigma[c] = sigma;
  }
  return p;
}

namespace {

void check_dims(const Matrix& values, const NormParams& params) {
  if (values.cols() != params.features()) {
    throw DataError("dimension mismatch: " + std::to_string(values.cols()) + " features vs " +
                    std::to_string(params.features()) + " normalization parameters");
  }
}

}  // namespace

Matrix zscore_apply(const Matrix& values, const NormParams& params) {
  check_dims(values, params);
  Matrix out(values.rows(), values.cols());
  for (std::size_t r = 0; r < values.rows(); ++r) {
    for (std::size_t c = 0; c < values.cols(); ++c) out(r, c) = params.apply(values(r, c), c);
  }
  return out;
}

Matrix zscore_invert(const Matrix& normalized, const NormParams& params) {
  check_dims(normalized, params);
  Matrix out(normalized.rows(), normalized.cols());
  for (std::size_t r = 0; r < normalized.rows(); ++r) {
    for (std::size_t c = 0; c < normalized.cols(); ++c) out(r, c) = params.invert(normalized(r, c), c);
  }
  return out;
}

std::size_t window_count(std::size_t rows, std::size_t length, std::size_t horizon, std::size_t stride) {
  if (length == 0 || horizon == 0 || stride == 0 || rows < length + horizon) return 0;
  return (rows - length - horizon) / stride + 1;
}

WindowedDataset make_windows(const Matrix& series, std::size_t length, std::size_t horizon, std::size_t stride,
                             std::size_t target_column) {
  if (length == 0 || horizon == 0 || stride == 0) {
    throw ConfigError("window length, horizon and stride must all be >= 1");
  }
  if (target_column >= series.cols()) {
    throw ConfigError("target column " + std::to_string(target_column) + " out of range");
  }
  const std::size_t count = window_count(series.rows(), length, horizon, stride);
  if (count == 0) {
    throw DataError("series too short: " + std::to_string(series.rows()) + " rows for window length " +
                    std::to_string(length) + " and horizon " + std::to_string(horizon));
  }
  WindowedDataset ds;
  ds.window_length = length;
  ds.horizon = horizon;
  ds.stride = stride;
  ds.features = series.cols();
  ds.windows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Window w;
    w.first_index = i * stride;
    w.input = series.slice_rows(w.first_index, length);
    w.target_index = w.first_index + length - 1 + horizon;
    w.target = series(w.target_index, target_column);
    ds.windows.push_back(std::move(w));
  }
  return ds;
}

}  // namespace hybridcast
