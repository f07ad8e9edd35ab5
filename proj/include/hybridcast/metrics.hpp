#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace hybridcast::metrics {

struct MetricReport {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // percent
  std::size_t n = 0;
  bool has_mape = true;
};

/// MAE, MSE, RMSE and MAPE (x100). Throws DataError on empty or mismatched input, and, when
/// `with_mape` is set, on a zero actual (the message names its index).
MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                             bool with_mape = true);

/// (baseline - hybrid) / baseline * 100; 0 when both are 0.
double improvement_percent(double baseline, double hybrid);

enum class Format { text, csv };
Format parse_format(std::string_view text);

/// Rows MAE, MSE, RMSE, MAPE with baseline, hybrid and improvement columns.
/// Throws DataError when the reports cover different sample counts.
std::string compare_report(const MetricReport& baseline, const MetricReport& hybrid, Format format = Format::text);

std::string metrics_report(const MetricReport& report, Format format = Format::text);

}  // namespace hybridcast::metrics
