#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybridcast/calendar.hpp"
#include "hybridcast/timeseries.hpp"

namespace hybridcast::synth {

struct SynthConfig {
  std::size_t days = 500;            // trading days (weekdays)
  double base_price = 100.0;
  double daily_volatility = 0.01;    // std of daily log return
  double jump_probability = 0.08;    // per trading day
  double jump_magnitude = 0.08;      // fractional move on the day after the news
  std::size_t min_articles = 2;      // per trading day
  std::size_t max_articles = 5;
  double contrary_probability = 0.25;  // event article also carries one opposite-polarity word
  double filler_noise = 0.05;          // quiet-day article leans 2:1 to one polarity
  std::uint64_t seed = 42;
  Date start = Date{std::chrono::year{2021} / std::chrono::January / 4};
  std::string company = "Acme Corp";

  void validate() const;
};

struct SynthEvent {
  Date date;          // day the news breaks; the price reacts on the next trading day
  int direction = 0;  // +1 or -1
  double magnitude = 0.0;

  friend bool operator==(const SynthEvent&, const SynthEvent&) = default;
};

struct SynthOutput {
  OhlcvSeries series;
  std::string feed_json;  // News-API shaped
  std::vector<SynthEvent> events;
};

/// Geometric random walk over weekdays with news-driven jumps. On an event day the articles all
/// carry the event's polarity and the close of the following day moves by (1 +- magnitude) on top
/// of the diffusion. Other days get neutral filler articles, some with mixed sentiment words.
/// Pure function of the config.
SynthOutput generate(const SynthConfig& config);

/// CSV `date,direction,magnitude`.
std::string events_csv(std::span<const SynthEvent> events);

/// Words the generator draws its polar phrases from (all present in the default lexicon).
std::span<const char* const> positive_vocabulary();
std::span<const char* const> negative_vocabulary();

}  // namespace hybridcast::synth
