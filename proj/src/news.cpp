#include "hybridcast/news.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::news {
namespace {

using nlohmann::json;

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '+' || c == '.' || c == '-';
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_space(char c) { return c == ' '; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ParsedFeed parse_feed(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded()) {
    throw DataError("news feed is not valid JSON");
  }
  if (!doc.is_object() || !doc.contains("articles") || !doc["articles"].is_array()) {
    throw DataError("news feed has no 'articles' array");
  }
  ParsedFeed feed;
  for (const json& entry : doc["articles"]) {
    if (!entry.is_object()) {
      ++feed.skipped;
      continue;
    }
    NewsArticle a;
    if (auto src = entry.find("source"); src != entry.end() && src->is_object()) {
      a.source_name = string_field(*src, "name");
    }
    a.title = string_field(entry, "title");
    a.body = string_field(entry, "content");
    if (a.body.empty()) a.body = string_field(entry, "description");
    const std::string published = string_field(entry, "publishedAt");
    if (a.source_name.empty() || published.empty() || (a.title.empty() && a.body.empty())) {
      ++feed.skipped;
      continue;
    }
    try {
      a.published_at = parse_timestamp(published);
    } catch (const DataError&) {
      ++feed.skipped;
      continue;
    }
    feed.articles.push_back(std::move(a));
  }
  return feed;
}

std::string clean_text(std::string_view text) {
  std::string s(text);
  for (char& c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7F) c = ' ';
  }
  // Drop every scheme-prefixed URL: from the first letter of the scheme up to the next space.
  for (std::size_t pos = s.find("://"); pos != std::string::npos; pos = s.find("://", pos)) {
    std::size_t start = pos;
    while (start > 0 && is_scheme_char(s[start - 1])) --start;
    while (start < pos && !is_alpha(s[start])) ++start;
    if (start == pos) {
      pos += 3;
      continue;
    }
    std::size_t end = pos + 3;
    while (end < s.size() && !is_space(s[end])) ++end;
    s.replace(start, end - start, " ");
    pos = start + 1;
  }
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_space(c) && (out.empty() || is_space(out.back()))) continue;
    out.push_back(c);
  }
  while (!out.empty() && is_space(out.back())) out.pop_back();
  return out;
}

std::string prepare_text(const NewsArticle& article) {
  const std::string title = clean_text(article.title);
  const std::string body = clean_text(article.body);
  if (title.empty()) return body;
  if (body.empty()) return title;
  return title + ". " + body;
}

SourceWeightRegistry::SourceWeightRegistry(double default_weight) : default_weight_(default_weight) {
  if (!(default_weight > 0.0 && default_weight <= 1.0)) {
    throw ConfigError("default source weight must lie in (0, 1]");
  }
}

void SourceWeightRegistry::set(std::string_view source, double weight) {
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw ConfigError("weight for '" + std::string(source) + "' must lie in (0, 1]");
  }
  weights_[lower(trim(source))] = weight;
}

double SourceWeightRegistry::weight(std::string_view source) const {
  auto it = weights_.find(lower(trim(source)));
  return it == weights_.end() ? default_weight_ : it->second;
}

SourceWeightRegistry load_registry(std::string_view text, double default_weight) {
  SourceWeightRegistry registry(default_weight);
  std::vector<std::pair<std::string, double>> entries;
  const auto lines = csv::lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("weight registry line " + std::to_string(i + 1) + ": expected source<TAB>weight");
    }
    const std::string_view name = trim(line.substr(0, tab));
    double w = 0.0;
    try {
      w = csv::parse_double(line.substr(tab + 1), "weight");
    } catch (const DataError& e) {
      throw DataError("weight registry line " + std::to_string(i + 1) + ": " + e.what());
    }
    if (name == "*") {
      registry = SourceWeightRegistry(w);
    } else {
      entries.emplace_back(std::string(name), w);
    }
  }
  for (const auto& [name, w] : entries) registry.set(name, w);
  return registry;
}

}  // namespace hybridcast::news
