#include <doctest.h>

#include <cmath>
#include <map>

#include "hybridcast/defaults.hpp"
#include "hybridcast/errors.hpp"
#include "hybridcast/news.hpp"
#include "hybridcast/sentiment.hpp"
#include "hybridcast/synth.hpp"

using namespace hybridcast;
using namespace hybridcast::synth;

namespace {

SynthConfig small(std::uint64_t seed) {
  SynthConfig c;
  c.days = 250;
  c.seed = seed;
  return c;
}

sentiment::LexiconScorer shipped() { return sentiment::LexiconScorer(sentiment::load_lexicon(default_lexicon_text())); }

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("same config, same bytes") {
    const auto a = generate(small(3)), b = generate(small(3));
    CHECK(write_ohlcv(a.series) == write_ohlcv(b.series));
    CHECK(a.feed_json == b.feed_json);
    CHECK(a.events == b.events);
    CHECK(write_ohlcv(generate(small(4)).series) != write_ohlcv(a.series));
  }

  TEST_CASE("weekdays only, positive prices, consistent bars") {
    const auto out = generate(small(5));
    REQUIRE(out.series.size() == 250);
    for (const auto& r : out.series) {
      CHECK(is_weekday(r.date));
      CHECK(r.close > 0.0);
      CHECK(r.low <= std::min(r.open, r.close));
      CHECK(r.high >= std::max(r.open, r.close));
    }
  }

  TEST_CASE("no jumps and no filler lean gives no events and sentiment-free days") {
    SynthConfig c = small(6);
    c.jump_probability = 0.0;
    c.filler_noise = 0.0;
    const auto out = generate(c);
    CHECK(out.events.empty());
    const auto feed = news::parse_feed(out.feed_json);
    CHECK(feed.skipped == 0);
    const auto scorer = shipped();
    for (const auto& a : feed.articles) CHECK(sentiment::signed_score(scorer.score(news::prepare_text(a))) == 0.0);
  }

  TEST_CASE("event count, price reaction and article polarity over many seeds") {
    const auto scorer = shipped();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      CAPTURE(seed);
      const SynthConfig c = small(seed);
      const auto out = generate(c);
      // Binomial(249, 0.08): mean 20, sd 4.3.
      CHECK(out.events.size() >= 8);
      CHECK(out.events.size() <= 35);

      std::map<Date, std::vector<double>> scores;
      const auto feed = news::parse_feed(out.feed_json);
      REQUIRE(feed.skipped == 0);
      for (const auto& a : feed.articles) {
        scores[day_of(a.published_at)].push_back(sentiment::signed_score(scorer.score(news::prepare_text(a))));
        CHECK(a.published_at >= Timestamp{day_of(a.published_at)});
      }
      for (const auto& e : out.events) {
        const std::size_t i = out.series.find(e.date);
        REQUIRE(i + 1 < out.series.size());
        const double ret = out.series[i + 1].close / out.series[i].close - 1.0;
        CHECK(ret * e.direction > c.daily_volatility);
        REQUIRE(scores.count(e.date) == 1);
        for (double s : scores[e.date]) CHECK(s * e.direction > 0.0);
      }
    }
  }

  TEST_CASE("articles per day stay in range and the vocabulary is in the lexicon") {
    const auto out = generate(small(7));
    const auto feed = news::parse_feed(out.feed_json);
    std::map<Date, int> per_day;
    for (const auto& a : feed.articles) ++per_day[day_of(a.published_at)];
    CHECK(per_day.size() == 250);
    for (const auto& [d, n] : per_day) {
      CHECK(n >= 2);
      CHECK(n <= 5);
    }
    const auto lex = sentiment::load_lexicon(default_lexicon_text());
    for (const char* w : positive_vocabulary()) CHECK(lex.positive.count(w) == 1);
    for (const char* w : negative_vocabulary()) CHECK(lex.negative.count(w) == 1);
  }

  TEST_CASE("events csv and config validation") {
    const std::vector<SynthEvent> ev{{parse_date("2024-01-02"), 1, 0.08}, {parse_date("2024-01-05"), -1, 0.08}};
    CHECK(events_csv(ev) == "date,direction,magnitude\n2024-01-02,1,0.08\n2024-01-05,-1,0.08\n");
    SynthConfig c;
    c.days = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SynthConfig{};
    c.jump_probability = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SynthConfig{};
    c.min_articles = 6;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SynthConfig{};
    c.filler_noise = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}
