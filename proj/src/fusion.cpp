#include "hybridcast/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::fusion {

Alignment parse_alignment(std::string_view text) {
  if (text == "target") return Alignment::target;
  if (text == "origin") return Alignment::origin;
  throw ConfigError("unknown alignment '" + std::string(text) + "' (expected target or origin)");
}

std::string_view alignment_name(Alignment a) { return a == Alignment::target ? "target" : "origin"; }

std::vector<FusionRecord> time_map(const PredictionSeries& predictions,
                                   std::span<const sentiment::SentimentInterval> sentiments,
                                   const OhlcvSeries& actuals, Alignment alignment) {
  std::map<Date, double> by_day;
  for (const auto& iv : sentiments) {
    const Date day = day_of(iv.start);
    if (iv.start != Timestamp{day} || iv.end - iv.start != std::chrono::seconds{std::chrono::days{1}}) {
      throw DataError("time mapping needs daily sentiment intervals; got one starting " + format_timestamp(iv.start));
    }
    if (!by_day.emplace(day, iv.w_cs).second) {
      throw DataError("duplicate sentiment interval for " + format_date(day));
    }
  }
  std::vector<FusionRecord> out;
  for (const Prediction& p : predictions) {
    const Date key = alignment == Alignment::target ? p.target : p.origin;
    auto it = by_day.find(key);
    if (it == by_day.end()) continue;
    FusionRecord r{p.target, p.value, it->second, std::nullopt};
    if (const std::size_t row = actuals.find(p.target); row < actuals.size()) {
      r.actual = actuals[row].close;
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const FusionRecord& a, const FusionRecord& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].date == out[i - 1].date) throw DataError("duplicate forecast for " + format_date(out[i].date));
  }
  if (out.empty()) {
    throw DataError("no overlapping intervals between forecasts and sentiment");
  }
  return out;
}

std::string emit_corpus(std::span<const FusionRecord> records) {
  std::string out;
  for (const FusionRecord& r : records) {
    if (!r.actual) {
      throw DataError("record " + format_date(r.date) + " has no actual value for the corpus target");
    }
    out += "{\"text\": \"LSTM prediction ";
    out += csv::fixed(r.lstm_prediction, 4);
    out += " and sentiment score ";
    out += csv::fixed(r.w_cs, 4);
    out += "\", \"target\": \"actual target ";
    out += csv::fixed(*r.actual, 4);
    out += "\"}\n";
  }
  return out;
}

namespace {

double take_number(std::string_view& rest, std::string_view prefix) {
  if (rest.substr(0, prefix.size()) != prefix) {
    throw DataError("corpus line does not match the template near '" + std::string(rest.substr(0, 32)) + "'");
  }
  rest.remove_prefix(prefix.size());
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc{}) throw DataError("corpus line: bad number");
  rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  return v;
}

}  // namespace

CorpusValues parse_corpus_line(std::string_view line) {
  CorpusValues v;
  std::string_view rest = line;
  v.prediction = take_number(rest, "{\"text\": \"LSTM prediction ");
  v.sentiment = take_number(rest, " and sentiment score ");
  v.target = take_number(rest, "\", \"target\": \"actual target ");
  if (rest != "\"}") throw DataError("corpus line has trailing content");
  return v;
}

SurrogateModel fit_surrogate(std::span<const FusionRecord> records) {
  std::vector<const FusionRecord*> rows;
  for (const FusionRecord& r : records) {
    if (r.actual) rows.push_back(&r);
  }
  const std::size_t n = rows.size();
  if (n < 3) {
    throw DataError("surrogate fit needs at least 3 records with actuals, got " + std::to_string(n));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double mp = 0.0, ms = 0.0, mv = 0.0;
  for (const FusionRecord* r : rows) {
    mp += r->lstm_prediction;
    ms += r->w_cs;
    mv += *r->actual;
  }
  mp *= inv_n;
  ms *= inv_n;
  mv *= inv_n;
  double spp = 0.0, sss = 0.0, sps = 0.0, spv = 0.0, ssv = 0.0;
  for (const FusionRecord* r : rows) {
    const double dp = r->lstm_prediction - mp;
    const double ds = r->w_cs - ms;
    const double dv = *r->actual - mv;
    spp += dp * dp;
    sss += ds * ds;
    sps += dp * ds;
    spv += dp * dv;
    ssv += ds * dv;
  }
  constexpr double kRelTol = 1e-12;
  if (!(spp > kRelTol * std::max(1.0, mp * mp) * static_cast<double>(n))) {
    throw DataError("rank-deficient design: prediction column is constant (collinear with the intercept)");
  }
  if (!(sss > kRelTol * static_cast<double>(n))) {
    throw DataError("rank-deficient design: sentiment column is constant (collinear with the intercept)");
  }
  const double det = spp * sss - sps * sps;
  if (!(det > 1e-10 * spp * sss)) {
    throw DataError("rank-deficient design: prediction and sentiment columns are collinear");
  }
  SurrogateModel m;
  m.a = (spv * sss - ssv * sps) / det;
  m.b = (ssv * spp - spv * sps) / det;
  m.c = mv - m.a * mp - m.b * ms;
  double rss = 0.0;
  for (const FusionRecord* r : rows) {
    const double e = *r->actual - surrogate_predict(m, r->lstm_prediction, r->w_cs);
    rss += e * e;
  }
  m.residual_mse = rss * inv_n;
  m.n = n;
  if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c)) {
    throw DataError("surrogate fit produced non-finite coefficients");
  }
  return m;
}

namespace {

std::string hex(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string save_surrogate(const SurrogateModel& model) {
  std::ostringstream out;
  out << "hybridcast-surrogate 1\n";
  out << "a " << hex(model.a) << "  # " << csv::shortest(model.a) << '\n';
  out << "b " << hex(model.b) << "  # " << csv::shortest(model.b) << '\n';
  out << "c " << hex(model.c) << "  # " << csv::shortest(model.c) << '\n';
  out << "residual_mse " << hex(model.residual_mse) << "  # " << csv::shortest(model.residual_mse) << '\n';
  out << "n " << model.n << '\n';
  return out.str();
}

SurrogateModel load_surrogate(std::string_view text) {
  const auto lines = csv::lines(text);
  if (lines.empty() || lines.front() != "hybridcast-surrogate 1") {
    throw DataError("not a surrogate model file");
  }
  std::map<std::string, std::string, std::less<>> fields;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    std::string key, value;
    if (in >> key >> value) fields[key] = value;
  }
  auto number = [&](const char* key) {
    auto it = fields.find(key);
    if (it == fields.end()) throw DataError(std::string("surrogate file: missing ") + key);
    double v = 0.0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw DataError(std::string("surrogate file: bad value for ") + key);
    }
    return v;
  };
  SurrogateModel m;
  m.a = number("a");
  m.b = number("b");
  m.c = number("c");
  m.residual_mse = number("residual_mse");
  auto it = fields.find("n");
  if (it == fields.end()) throw DataError("surrogate file: missing n");
  m.n = static_cast<std::size_t>(csv::parse_double(it->second, "n"));
  return m;
}

std::string write_records(std::span<const FusionRecord> records) {
  std::string out = "date,lstm_pred,w_cs,actual\n";
  for (const FusionRecord& r : records) {
    out += format_date(r.date) + ',' + csv::shortest(r.lstm_prediction) + ',' + csv::shortest(r.w_cs) + ',' +
           (r.actual ? csv::shortest(*r.actual) : std::string()) + '\n';
  }
  return out;
}

std::vector<FusionRecord> read_records(std::string_view csv_text) {
  const auto lines = csv::lines(csv_text);
  if (lines.empty() || lines.front() != "date,lstm_pred,w_cs,actual") {
    throw DataError("records CSV must start with header 'date,lstm_pred,w_cs,actual'");
  }
  std::vector<FusionRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      const auto f = csv::split_record(lines[i]);
      if (f.size() != 4) throw DataError("expected 4 fields");
      FusionRecord r{parse_date(f[0]), csv::parse_double(f[1], "lstm_pred"), csv::parse_double(f[2], "w_cs"),
                     std::nullopt};
      if (!(r.w_cs >= -1.0 && r.w_cs <= 1.0)) throw DataError("w_cs outside [-1, 1]");
      if (!f[3].empty()) r.actual = csv::parse_double(f[3], "actual");
      out.push_back(r);
    } catch (const DataError& e) {
      throw DataError("records line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hybridcast::fusion
