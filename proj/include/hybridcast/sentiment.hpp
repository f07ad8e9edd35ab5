#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/calendar.hpp"
#include "hybridcast/news.hpp"

namespace hybridcast::sentiment {

enum class Tag { positive, negative, neutral };
std::string_view tag_name(Tag tag);
/// Accepts POSITIVE / NEGATIVE / NEUTRAL and the NEURAL misspelling, case-insensitively.
Tag parse_tag(std::string_view text);

struct SentimentLabel {
  Tag tag = Tag::neutral;
  double confidence = 0.0;  // [0, 1]

  friend bool operator==(const SentimentLabel&, const SentimentLabel&) = default;
};

/// Text in, label out. Implementations must be deterministic for a fixed version.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual SentimentLabel score(std::string_view text) const = 0;
};

struct Lexicon {
  std::set<std::string> positive;
  std::set<std::string> negative;
};

/// Lines of `word<TAB>+` or `word<TAB>-`; `#` starts a comment.
Lexicon load_lexicon(std::string_view text);

/// Lower-cased ASCII letter runs.
std::vector<std::string> tokenize(std::string_view text);

/// Counts lexicon hits: confidence = |pos - neg| / max(1, pos + neg), tag by the sign of pos - neg.
class LexiconScorer final : public SentimentScorer {
 public:
  explicit LexiconScorer(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}
  SentimentLabel score(std::string_view text) const override;
  const Lexicon& lexicon() const { return lexicon_; }

 private:
  Lexicon lexicon_;
};

/// Talks to a long-running child process (`/bin/sh -c command`): one cleaned text per line on its
/// stdin, one `TAG<TAB>confidence` line back on its stdout. Texts are cut to 512 tokens.
class ProcessScorer final : public SentimentScorer {
 public:
  static constexpr std::size_t kMaxTokens = 512;

  explicit ProcessScorer(const std::string& command);
  ~ProcessScorer() override;
  ProcessScorer(const ProcessScorer&) = delete;
  ProcessScorer& operator=(const ProcessScorer&) = delete;

  SentimentLabel score(std::string_view text) const override;

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::mutex mutex_;
  mutable std::string pending_;
};

/// Limits text to at most `max_tokens` whitespace-separated tokens joined by single spaces.
std::string truncate_tokens(std::string_view text, std::size_t max_tokens);

/// NEGATIVE -> -confidence, otherwise +confidence.
double signed_score(const SentimentLabel& label);

struct ScoredArticle {
  news::NewsArticle article;
  SentimentLabel label;
  double signed_score = 0.0;  // [-1, 1]
  double weight = 1.0;        // (0, 1]
};

/// Cleans, scores and weights every article. Output order follows the input.
std::vector<ScoredArticle> score_articles(const std::vector<news::NewsArticle>& articles,
                                          const SentimentScorer& scorer, const news::SourceWeightRegistry& registry);

/// Weighted mean sum(w_i x_i) / sum(w_i). Throws DataError on an empty list or a weight <= 0.
double weighted_cumulative(std::span<const ScoredArticle> scored);

enum class Granularity { day, hour };
Granularity parse_granularity(std::string_view text);

struct SentimentInterval {
  Timestamp start;
  Timestamp end;
  double w_cs = 0.0;
  std::size_t article_count = 0;

  friend bool operator==(const SentimentInterval&, const SentimentInterval&) = default;
};

/// Groups by UTC calendar day or hour; one interval per non-empty bucket, ascending.
std::vector<SentimentInterval> bucket_by_interval(std::span<const ScoredArticle> scored, Granularity granularity);

/// CSV `published_at,source,weight,tag,confidence,signed_score`.
std::string scored_csv(std::span<const ScoredArticle> scored);

/// CSV `start,end,w_cs,count`, timestamps ISO-8601 UTC, w_cs in shortest round-trip form.
std::string write_intervals(std::span<const SentimentInterval> intervals);
std::vector<SentimentInterval> read_intervals(std::string_view csv_text);

}  // namespace hybridcast::sentiment
