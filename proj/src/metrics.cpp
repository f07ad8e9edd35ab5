#include "hybridcast/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

#include "hybridcast/errors.hpp"

namespace hybridcast::metrics {

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted, bool with_mape) {
  if (actual.size() != predicted.size()) {
    throw DataError("length mismatch: " + std::to_string(actual.size()) + " actual vs " +
                    std::to_string(predicted.size()) + " predicted values");
  }
  if (actual.empty()) throw DataError("metrics of an empty series");
  MetricReport r;
  r.n = actual.size();
  r.has_mape = with_mape;
  double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    if (with_mape) {
      if (actual[i] == 0.0) {
        throw DataError("MAPE undefined: actual value at index " + std::to_string(i) + " is zero");
      }
      pct_sum += std::abs(e) / std::abs(actual[i]);
    }
  }
  const double n = static_cast<double>(r.n);
  r.mae = abs_sum / n;
  r.mse = sq_sum / n;
  r.rmse = std::sqrt(r.mse);
  r.mape = with_mape ? 100.0 * pct_sum / n : 0.0;
  return r;
}

double improvement_percent(double baseline, double hybrid) {
  if (baseline == 0.0) return hybrid == 0.0 ? 0.0 : -INFINITY;
  return (baseline - hybrid) / baseline * 100.0;
}

Format parse_format(std::string_view text) {
  if (text == "text") return Format::text;
  if (text == "csv") return Format::csv;
  throw ConfigError("unknown format '" + std::string(text) + "' (expected text or csv)");
}

namespace {

struct Row {
  const char* label;
  const char* key;
  double baseline;
  double hybrid;
};

std::string num(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string compare_report(const MetricReport& baseline, const MetricReport& hybrid, Format format) {
  if (baseline.n != hybrid.n) {
    throw DataError("reports cover different sample counts: " + std::to_string(baseline.n) + " vs " +
                    std::to_string(hybrid.n));
  }
  const bool mape = baseline.has_mape && hybrid.has_mape;
  const Row rows[] = {
      {"Mean Absolute Error (MAE)", "mae", baseline.mae, hybrid.mae},
      {"Mean Squared Error (MSE)", "mse", baseline.mse, hybrid.mse},
      {"Root Mean Squared Error (RMSE)", "rmse", baseline.rmse, hybrid.rmse},
      {"Mean Absolute Percentage Error (MAPE)", "mape", baseline.mape, hybrid.mape},
  };
  std::string out;
  char line[256];
  if (format == Format::csv) {
    out = "metric,conv_lstm,hybrid,improvement_pct\n";
    for (const Row& r : rows) {
      if (!mape && std::string_view(r.key) == "mape") continue;
      out += std::string(r.key) + ',' + num(r.baseline, 6) + ',' + num(r.hybrid, 6) + ',' +
             num(improvement_percent(r.baseline, r.hybrid), 2) + '\n';
    }
    return out;
  }
  std::string header = "Error metric (n=" + std::to_string(baseline.n) + ")";
  std::snprintf(line, sizeof line, "%-38s %14s %14s %12s\n", header.c_str(), "Conv-LSTM", "Hybrid", "Improvement");
  out += line;
  for (const Row& r : rows) {
    if (!mape && std::string_view(r.key) == "mape") continue;
    std::snprintf(line, sizeof line, "%-38s %14.6f %14.6f %11.2f%%\n", r.label, r.baseline, r.hybrid,
                  improvement_percent(r.baseline, r.hybrid));
    out += line;
  }
  return out;
}

std::string metrics_report(const MetricReport& report, Format format) {
  if (format == Format::csv) {
    std::string out = "metric,value\n";
    out += "mae," + num(report.mae, 6) + '\n';
    out += "mse," + num(report.mse, 6) + '\n';
    out += "rmse," + num(report.rmse, 6) + '\n';
    if (report.has_mape) out += "mape," + num(report.mape, 6) + '\n';
    out += "n," + std::to_string(report.n) + '\n';
    return out;
  }
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "%-6s %14.6f\n%-6s %14.6f\n%-6s %14.6f\n", "MAE", report.mae, "MSE", report.mse,
                "RMSE", report.rmse);
  out += line;
  if (report.has_mape) {
    std::snprintf(line, sizeof line, "%-6s %14.6f\n", "MAPE", report.mape);
    out += line;
  }
  out += "n      " + std::to_string(report.n) + '\n';
  return out;
}

}  // namespace hybridcast::metrics
