// Acceptance criteria, one PASS/FAIL line each. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hybridcast/cli.hpp"
#include "hybridcast/convlstm.hpp"
#include "hybridcast/fusion.hpp"
#include "hybridcast/metrics.hpp"
#include "hybridcast/pipeline.hpp"
#include "hybridcast/sentiment.hpp"
#include "hybridcast/seqlen.hpp"
#include "hybridcast/timeseries.hpp"
#include "oracles.hpp"

using namespace hybridcast;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kGradTol = 1e-4;
constexpr double kGradSeconds = 30.0;
constexpr double kOracleTol = 1e-12;
constexpr double kOracleSeconds = 5.0;
constexpr double kNormTol = 1e-9;
constexpr int kSearchBudget = 100;
constexpr double kWcsTol = 1e-12;
constexpr double kCorpusTol = 5e-5;
constexpr double kMetricTol = 1e-12;
constexpr double kRequiredImprovement = 25.0;  // percent, hybrid MAE below baseline MAE
constexpr int kRequiredSeeds = 8;
constexpr double kEndToEndSeconds = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<double> fingerprint;  // numbers a rerun must reproduce bit for bit
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// 1. Analytic gradients against central differences on small seeded models.
Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  testgen::Gen g(1001);
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const convlstm::Shape shape{g.size(1, 3), g.size(1, 2), g.coin() ? 3u : 1u};
    const auto p = convlstm::init_params(shape, 5000 + static_cast<std::uint64_t>(trial));
    const Matrix w = g.matrix(g.size(2, 6), shape.features, -2.0, 2.0);
    // Residuals of 0.4 or 2.5 keep the Huber loss away from its knee at delta = 1.
    const double target = convlstm::forward(w, p) + (trial % 2 == 0 ? 0.4 : -2.5);
    for (auto kind : {convlstm::LossKind::huber, convlstm::LossKind::mse}) {
      const auto r = convlstm::grad_check(p, w, target, kind, 1.0);
      worst = std::max(worst, r.max_relative_error);
      o.fingerprint.push_back(r.max_relative_error);
    }
  }
  const double secs = seconds_since(t0);
  o.pass = worst < kGradTol && secs < kGradSeconds;
  o.detail = fmt("max relative error %.3g over 20 models x 2 losses (tol %.0e), %.2f s", worst, kGradTol, secs);
  return o;
}

// 2. Vectorized cell against the one-unit-at-a-time equations.
Outcome scalar_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  testgen::Gen g(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const convlstm::Shape shape{g.size(1, 4), g.size(1, 3), 2 * g.size(0, 2) + 1};
    convlstm::Params p(shape);
    for (double& v : p.values()) v = g.uniform(-1.0, 1.0);
    const std::size_t H = shape.hidden();
    const auto x = g.vec(shape.features, -3.0, 3.0);
    const convlstm::CellState prev{g.vec(H, -1.0, 1.0), g.vec(H, -2.0, 2.0)};
    const auto got = convlstm::cell_forward(x, prev, p);
    const auto want = oracle::cell(x, {prev.h, prev.c}, p);
    for (std::size_t u = 0; u < H; ++u) {
      worst = std::max({worst, std::abs(got.h[u] - want.h[u]), std::abs(got.c[u] - want.c[u])});
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= kOracleTol && secs < kOracleSeconds;
  o.detail = fmt("max |h, c difference| %.3g over 100 cases (tol %.0e), %.3f s", worst, kOracleTol, secs);
  return o;
}

// 3. Z-score normalization round trip and fitted moments.
Outcome normalization() {
  testgen::Gen g(1003);
  double worst_trip = 0.0, worst_mean = 0.0, worst_sd = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = g.size(2, 300), f = g.size(1, 4);
    const double scale = std::pow(10.0, g.uniform(-2.0, 4.0));
    const double offset = g.uniform(-1.0, 1.0) * 10.0 * scale;
    Matrix v = g.matrix(n, f, offset - scale, offset + scale);
    for (std::size_t c = 0; c < f; ++c) v(0, c) = offset + 2.0 * scale;  // never constant
    const NormParams params = zscore_fit(v);
    const Matrix z = zscore_apply(v, params);
    const Matrix back = zscore_invert(z, params);
    for (std::size_t c = 0; c < f; ++c) {
      double mean = 0.0, sq = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        worst_trip = std::max(worst_trip, std::abs(back(r, c) - v(r, c)) / std::max(1.0, std::abs(v(r, c))));
        mean += z(r, c);
      }
      mean /= static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) sq += (z(r, c) - mean) * (z(r, c) - mean);
      worst_mean = std::max(worst_mean, std::abs(mean));
      worst_sd = std::max(worst_sd, std::abs(std::sqrt(sq / static_cast<double>(n)) - 1.0));
    }
  }
  Outcome o;
  o.pass = worst_trip < kNormTol && worst_mean < kNormTol && worst_sd < kNormTol;
  o.detail = fmt("round trip %.3g, |mean| %.3g, |sd - 1| %.3g over 100 series", worst_trip, worst_mean, worst_sd);
  return o;
}

// 4. Window-length search on unimodal curves.
Outcome length_search() {
  testgen::Gen g(1004);
  Outcome o;
  int hits = 0;
  std::size_t most_evals = 0;
  for (int trial = 0; trial < 20; ++trial) {
    seqlen::SearchConfig cfg;
    cfg.min_length = 2;
    cfg.max_length = g.integer(20, 120);
    cfg.initial_length = g.integer(cfg.min_length, cfg.max_length);
    cfg.initial_step = static_cast<double>(g.integer(2, 16));
    cfg.reduction = 0.5;
    cfg.threshold = 1e-9;
    const int peak = g.integer(cfg.min_length, cfg.max_length);
    const double width = g.uniform(2.0, 40.0);
    const seqlen::Evaluator p = [&](int L) { return -std::pow((L - peak) / width, 2) - 1e-6 * L; };
    const auto r = seqlen::search_optimal_length(p, cfg);
    const double step = r.trace.empty() ? 0.0 : r.trace.back().step;
    if (std::abs(r.best_length - peak) <= std::max(1.0, step) && r.evaluations <= kSearchBudget) ++hits;
    most_evals = std::max(most_evals, r.evaluations);
    o.fingerprint.push_back(r.best_length);
    o.fingerprint.push_back(static_cast<double>(r.evaluations));
  }
  o.pass = hits == 20;
  o.detail = fmt("%.0f/20 within the final step of the peak, at most %.0f evaluations (budget %.0f)", hits,
                 static_cast<double>(most_evals), kSearchBudget);
  return o;
}

// 5. Weighted cumulative sentiment: exact examples and invariants.
Outcome weighted_sentiment() {
  auto article = [](double w, double x) {
    sentiment::ScoredArticle a;
    a.weight = w;
    a.signed_score = x;
    return a;
  };
  const std::vector<sentiment::ScoredArticle> sym{article(1, 0.5), article(1, -0.5)};
  const std::vector<sentiment::ScoredArticle> two{article(2, 0.9), article(1, -0.3)};
  bool ok = sentiment::weighted_cumulative(sym) == 0.0 && sentiment::weighted_cumulative(two) == 0.5;
  const bool examples = ok;

  testgen::Gen g(1005);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = g.size(1, 25);
    const int sign = g.integer(-1, 1);
    std::vector<sentiment::ScoredArticle> xs;
    double lo = 1.0, hi = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = g.uniform(-1.0, 1.0);
      if (sign != 0) x = sign * std::abs(x);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      xs.push_back(article(g.uniform(1e-3, 1.0), x));
    }
    const double w = sentiment::weighted_cumulative(xs);
    auto shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    auto scaled = xs;
    const double c = std::pow(10.0, g.uniform(-6.0, 6.0));
    for (auto& a : scaled) a.weight *= c;
    const bool good = w >= lo && w <= hi && (sign <= 0 || w >= 0.0) && (sign >= 0 || w <= 0.0) &&
                      std::abs(sentiment::weighted_cumulative(shuffled) - w) <= kWcsTol &&
                      std::abs(sentiment::weighted_cumulative(scaled) - w) <= kWcsTol;
    if (!good) ++failures;
  }
  Outcome o;
  o.pass = examples && failures == 0;
  o.detail = std::string("exact examples ") + (examples ? "match" : "differ") +
             fmt(", %.0f/1000 fixtures violate bounds, permutation, scale or sign", failures);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 6. Corpus emission through the command line, byte-exact, and its parse-back.
Outcome corpus_golden() {
  const std::string data = HC_TEST_DATA;
  const fs::path out = fs::temp_directory_path() / "hybridcast_acceptance_corpus";
  fs::remove_all(out);
  const std::string records = data + "/corpus_fixture.csv";
  const char* argv[] = {"hybridcast", "--out", out.c_str(), "emit-corpus", "--records", records.c_str()};
  std::ostringstream sout, serr;
  const int code = run_cli(6, argv, sout, serr);
  const std::string got = slurp(out / "corpus.jsonl");
  const bool exact = code == 0 && got == slurp(data + "/corpus_golden.jsonl");

  const auto fixture = fusion::read_records(slurp(records));
  double worst = 0.0;
  std::size_t lines = 0, pos = 0;
  while (pos < got.size()) {
    const std::size_t nl = got.find('\n', pos);
    if (nl == std::string::npos || lines >= fixture.size()) {
      worst = INFINITY;
      break;
    }
    const auto v = fusion::parse_corpus_line(std::string_view(got).substr(pos, nl - pos));
    const auto& r = fixture[lines];
    worst = std::max({worst, std::abs(v.prediction - r.lstm_prediction), std::abs(v.sentiment - r.w_cs),
                      std::abs(v.target - r.actual.value_or(NAN))});
    pos = nl + 1;
    ++lines;
  }
  Outcome o;
  o.pass = exact && lines == fixture.size() && worst <= kCorpusTol;
  o.detail = std::string(exact ? "byte-exact" : "differs from golden") +
             fmt(", exit %.0f, %.0f lines, parse-back error %.3g", code, static_cast<double>(lines), worst);
  return o;
}

// 7. Metric identities and the improvement arithmetic.
Outcome metric_identities() {
  testgen::Gen g(1007);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = g.size(1, 200);
    const auto a = g.vec(n, 1.0, 500.0);
    const auto p = g.vec(n, 1.0, 500.0);
    const auto r = metrics::compute_metrics(a, p);
    if (std::abs(r.rmse * r.rmse - r.mse) > kMetricTol * std::max(1.0, r.mse) || r.mae > r.rmse * (1 + kMetricTol)) {
      ++failures;
    }
  }
  const double imp = metrics::improvement_percent(3.258327, 1.605440);
  metrics::MetricReport base, hybrid;
  base.mae = 3.258327;
  hybrid.mae = 1.605440;
  base.n = hybrid.n = 1;
  const bool table = metrics::compare_report(base, hybrid).find("50.73%") != std::string::npos;
  Outcome o;
  o.pass = failures == 0 && std::abs(imp - 50.73) < 5e-3 && table;
  o.detail = fmt("%.0f/100 pairs violate rmse^2 = mse or mae <= rmse; improvement %.4f%%", failures, imp) +
             (table ? ", table shows 50.73%" : ", table lacks 50.73%");
  return o;
}

// 8. Synthetic end-to-end: the sentiment fusion beats the Conv-LSTM alone.
Outcome end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    pipeline::PipelineConfig cfg;
    cfg.set_seed(seed);
    cfg.synth.days = 500;
    cfg.synth.jump_probability = 0.08;
    const auto r = pipeline::run_end_to_end(cfg);
    const auto& ev = r.evaluation;
    const double imp = metrics::improvement_percent(ev.baseline.mae, ev.hybrid.mae);
    if (imp >= kRequiredImprovement) ++wins;
    per_seed += fmt(" %.0f:", static_cast<double>(seed)) + fmt("%.1f", imp);
    o.fingerprint.push_back(ev.baseline.mae);
    o.fingerprint.push_back(ev.hybrid.mae);
  }
  const double secs = seconds_since(t0);
  o.pass = wins >= kRequiredSeeds && secs < kEndToEndSeconds;
  o.detail = fmt("%.0f/10 seeds with MAE improvement >= %.0f%% (need %.0f), ", wins, kRequiredImprovement,
                 kRequiredSeeds) +
             fmt("%.1f s; per seed %%:", secs) + per_seed;
  return o;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
  }
  return true;
}

void report(int id, const char* name, const Outcome& o, int& failed) {
  std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failed;
}

}  // namespace

int main() {
  int failed = 0;
  const Outcome c1 = gradient_check();
  report(1, "gradient check", c1, failed);
  report(2, "scalar cell oracle", scalar_oracle(), failed);
  report(3, "normalization", normalization(), failed);
  const Outcome c4 = length_search();
  report(4, "window-length search", c4, failed);
  report(5, "weighted sentiment", weighted_sentiment(), failed);
  report(6, "corpus golden", corpus_golden(), failed);
  report(7, "metric identities", metric_identities(), failed);
  const Outcome c8 = end_to_end();
  report(8, "end-to-end improvement", c8, failed);

  Outcome c9;
  const Outcome r1 = gradient_check(), r4 = length_search(), r8 = end_to_end();
  const bool s1 = same_bits(c1.fingerprint, r1.fingerprint);
  const bool s4 = same_bits(c4.fingerprint, r4.fingerprint);
  const bool s8 = same_bits(c8.fingerprint, r8.fingerprint);
  c9.pass = s1 && s4 && s8;
  c9.detail = std::string("rerun of criteria 1, 4, 8: ") + (s1 ? "identical" : "differs") + ", " +
              (s4 ? "identical" : "differs") + ", " + (s8 ? "identical" : "differs");
  report(9, "determinism", c9, failed);
  return failed == 0 ? 0 : 1;
}
