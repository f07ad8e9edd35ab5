#include "hybridcast/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <random>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::synth {
namespace {

constexpr std::array<const char*, 6> kPosVerbs = {"surges", "soars", "rallies", "climbs", "jumps", "rebounds"};
constexpr std::array<const char*, 7> kPosAdjectives = {"strong", "robust", "record", "impressive",
                                                       "stellar", "solid", "upbeat"};
constexpr std::array<const char*, 6> kPosNouns = {"growth", "profit", "momentum", "optimism", "recovery", "expansion"};
constexpr std::array<const char*, 6> kNegVerbs = {"plunges", "tumbles", "slumps", "sinks", "slides", "plummets"};
constexpr std::array<const char*, 5> kNegAdjectives = {"weak", "disappointing", "bearish", "downbeat", "pessimistic"};
constexpr std::array<const char*, 6> kNegNouns = {"losses", "shortfall", "uncertainty", "concerns", "downturn",
                                                  "layoffs"};

constexpr std::array<const char*, 19> kPositiveVocabulary = {
    "surges", "soars",  "rallies", "climbs", "jumps",    "rebounds", "strong",   "robust",   "record",   "impressive",
    "stellar", "solid", "upbeat",  "growth", "profit",   "momentum", "optimism", "recovery", "expansion"};
constexpr std::array<const char*, 17> kNegativeVocabulary = {
    "plunges", "tumbles", "slumps", "sinks", "slides", "plummets", "weak", "disappointing", "bearish",
    "downbeat", "pessimistic", "losses", "shortfall", "uncertainty", "concerns", "downturn", "layoffs"};

constexpr std::array<const char*, 6> kNeutralTitles = {
    "{co} schedules annual shareholder meeting", "{co} names new board member",
    "{co} to present at industry conference",    "{co} files quarterly report with regulators",
    "{co} updates product catalogue",            "Market wrap: {co} trades in line with sector"};
constexpr std::array<const char*, 4> kNeutralBodies = {
    "The company said further details would be shared with investors in the coming weeks.",
    "Shares changed hands at typical volumes during the session.",
    "Executives are expected to discuss operations and plans with analysts.",
    "The filing covers routine matters and contains no guidance changes."};

constexpr std::array<const char*, 11> kSources = {
    "Reuters",       "Bloomberg",     "The Wall Street Journal", "Financial Times", "CNBC",          "MarketWatch",
    "Yahoo Finance", "Seeking Alpha", "Benzinga",                "Motley Fool",     "Blogspot Daily"};

template <std::size_t N>
const char* pick(const std::array<const char*, N>& words, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, N - 1);
  return words[d(rng)];
}

std::string replace_company(std::string text, const std::string& company) {
  const std::string key = "{co}";
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + company.size())) {
    text.replace(pos, key.size(), company);
  }
  return text;
}

struct Article {
  std::string title;
  std::string body;
};

Article polar_article(int direction, const std::string& company, double contrary, std::mt19937_64& rng) {
  const bool up = direction > 0;
  Article a;
  a.title = company + " " + (up ? pick(kPosVerbs, rng) : pick(kNegVerbs, rng)) + " on " +
            (up ? pick(kPosAdjectives, rng) : pick(kNegAdjectives, rng)) + " outlook";
  a.body = std::string("Analysts described the quarter as ") +
           (up ? pick(kPosAdjectives, rng) : pick(kNegAdjectives, rng)) + ", pointing to " +
           (up ? pick(kPosNouns, rng) : pick(kNegNouns, rng)) + " in core segments.";
  if (std::bernoulli_distribution(contrary)(rng)) {
    a.body += std::string(" A few holders voiced ") + (up ? pick(kNegNouns, rng) : pick(kPosNouns, rng)) + ".";
  }
  return a;
}

// Balanced clauses score neutral; the occasional leaning clause is the only filler signal.
Article filler_article(const std::string& company, double lean, std::mt19937_64& rng) {
  Article a;
  a.title = replace_company(pick(kNeutralTitles, rng), company);
  a.body = pick(kNeutralBodies, rng);
  if (std::bernoulli_distribution(lean)(rng)) {
    const bool lean_up = std::bernoulli_distribution(0.5)(rng);
    a.body += std::string(" Commentators called the tone ") + pick(kPosAdjectives, rng) + " yet " +
              pick(kNegAdjectives, rng) + ", and flows looked " +
              (lean_up ? pick(kPosAdjectives, rng) : pick(kNegAdjectives, rng)) + ".";
  } else if (std::bernoulli_distribution(0.15)(rng)) {
    a.body += std::string(" Commentators called the tone ") + pick(kPosAdjectives, rng) + " yet " +
              pick(kNegAdjectives, rng) + ".";
  }
  return a;
}

}  // namespace

void SynthConfig::validate() const {
  if (days < 2) throw ConfigError("synthetic series needs at least 2 days");
  if (!(base_price > 0.0)) throw ConfigError("base price must be > 0");
  if (!(daily_volatility >= 0.0)) throw ConfigError("volatility must be >= 0");
  if (!(jump_probability >= 0.0 && jump_probability <= 1.0)) throw ConfigError("jump probability must lie in [0, 1]");
  if (!(jump_magnitude >= 0.0 && jump_magnitude < 1.0)) throw ConfigError("jump magnitude must lie in [0, 1)");
  if (!(contrary_probability >= 0.0 && contrary_probability <= 1.0) || !(filler_noise >= 0.0 && filler_noise <= 1.0)) {
    throw ConfigError("article noise probabilities must lie in [0, 1]");
  }
  if (min_articles < 1 || max_articles < min_articles) throw ConfigError("articles per day range is invalid");
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution jump(config.jump_probability);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> article_count(config.min_articles, config.max_articles);
  std::uniform_int_distribution<int> hour(0, 23), minute(0, 59);
  std::uniform_int_distribution<std::size_t> source(0, kSources.size() - 1);
  std::uniform_int_distribution<int> chars(200, 4000);

  std::vector<Date> dates;
  for (Date d = config.start; dates.size() < config.days; d += std::chrono::days{1}) {
    if (is_weekday(d)) dates.push_back(d);
  }

  SynthOutput out;
  std::vector<OhlcvRow> rows;
  rows.reserve(config.days);
  nlohmann::ordered_json articles = nlohmann::ordered_json::array();
  const double sigma = config.daily_volatility;
  double prev_close = config.base_price;
  int pending_direction = 0;
  std::size_t article_id = 0;

  for (std::size_t t = 0; t < config.days; ++t) {
    const double diffusion = sigma * normal(rng) - 0.5 * sigma * sigma;
    double close = prev_close * std::exp(diffusion);
    if (pending_direction != 0) close *= 1.0 + pending_direction * config.jump_magnitude;
    const double open = t == 0 ? config.base_price : prev_close * std::exp(0.25 * sigma * normal(rng));
    const double high = std::max(open, close) * (1.0 + 0.5 * sigma * std::abs(normal(rng)));
    const double low = std::min(open, close) * (1.0 - 0.5 * sigma * std::abs(normal(rng)));
    const double volume = std::round(std::exp(std::log(1.0e6) + 0.25 * normal(rng)));
    rows.push_back({dates[t], open, high, low, close, close, volume});
    prev_close = close;

    // Events need a following day for the price to react on.
    pending_direction = 0;
    if (t + 1 < config.days && jump(rng)) {
      pending_direction = coin(rng) ? 1 : -1;
      out.events.push_back({dates[t], pending_direction, config.jump_magnitude});
    }

    const std::size_t n_articles = article_count(rng);
    std::vector<std::pair<int, nlohmann::ordered_json>> day_articles;
    for (std::size_t k = 0; k < n_articles; ++k) {
      const Article a = pending_direction != 0 ? polar_article(pending_direction, config.company, config.contrary_probability, rng)
                                               : filler_article(config.company, config.filler_noise, rng);
      const int minute_of_day = hour(rng) * 60 + minute(rng);
      const Timestamp ts = Timestamp{dates[t]} + std::chrono::minutes{minute_of_day};
      std::string content = a.body;
      if (coin(rng)) content += " Read more: https://news.example.com/acme/" + std::to_string(article_id);
      content += " [+" + std::to_string(chars(rng)) + " chars]";
      nlohmann::ordered_json j;
      j["source"] = {{"id", nullptr}, {"name", kSources[source(rng)]}};
      j["author"] = nullptr;
      j["title"] = a.title;
      j["description"] = a.body;
      j["url"] = "https://news.example.com/acme/" + std::to_string(article_id);
      j["urlToImage"] = nullptr;
      j["publishedAt"] = format_timestamp(ts);
      j["content"] = content;
      ++article_id;
      day_articles.emplace_back(minute_of_day, std::move(j));
    }
    std::stable_sort(day_articles.begin(), day_articles.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [m, j] : day_articles) articles.push_back(std::move(j));
  }

  out.series = OhlcvSeries(std::move(rows));
  nlohmann::ordered_json feed;
  feed["status"] = "ok";
  feed["totalResults"] = articles.size();
  feed["articles"] = std::move(articles);
  out.feed_json = feed.dump(2) + "\n";
  return out;
}

std::string events_csv(std::span<const SynthEvent> events) {
  std::string out = "date,direction,magnitude\n";
  for (const SynthEvent& e : events) {
    out += format_date(e.date) + ',' + std::to_string(e.direction) + ',' + csv::shortest(e.magnitude) + '\n';
  }
  return out;
}

std::span<const char* const> positive_vocabulary() { return kPositiveVocabulary; }
std::span<const char* const> negative_vocabulary() { return kNegativeVocabulary; }

}  // namespace hybridcast::synth
