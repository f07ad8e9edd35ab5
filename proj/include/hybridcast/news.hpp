#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/calendar.hpp"

namespace hybridcast::news {

struct NewsArticle {
  std::string source_name;
  std::string title;
  std::string body;
  Timestamp published_at;

  friend bool operator==(const NewsArticle&, const NewsArticle&) = default;
};

struct ParsedFeed {
  std::vector<NewsArticle> articles;
  std::size_t skipped = 0;  // entries without usable title/content, source or date
};

/// Parses a News-API shaped document: `{"articles": [{"source": {"name": ...}, "title": ...,
/// "description": ..., "content": ..., "publishedAt": ...}]}`. `content` is the body,
/// `description` stands in when content is absent or empty. Throws DataError when the text is
/// not JSON or has no `articles` array.
ParsedFeed parse_feed(std::string_view json_text);

/// Title and body joined with ". ", with control characters and scheme-prefixed URLs removed
/// and whitespace collapsed. Empty parts are left out of the join.
std::string prepare_text(const NewsArticle& article);

/// Cleaning applied to each part by prepare_text.
std::string clean_text(std::string_view text);

/// Source name -> reputation weight in (0, 1]; lookups are case-insensitive.
class SourceWeightRegistry {
 public:
  explicit SourceWeightRegistry(double default_weight = 0.5);

  void set(std::string_view source, double weight);
  double weight(std::string_view source) const;
  double default_weight() const { return default_weight_; }
  std::size_t size() const { return weights_.size(); }

 private:
  double default_weight_;
  std::map<std::string, double> weights_;
};

/// Lines of `source<TAB>weight`; `#` starts a comment. A `*` source sets the default weight.
SourceWeightRegistry load_registry(std::string_view text, double default_weight = 0.5);

inline double source_weight(const SourceWeightRegistry& registry, std::string_view source) {
  return registry.weight(source);
}

/// Optional live fetch. Reads the API key from NEWS_API_KEY and returns the raw JSON body.
/// Only plain `http://` endpoints are supported; throws DataError on failure.
std::string fetch_feed(const std::string& url);

}  // namespace hybridcast::news
