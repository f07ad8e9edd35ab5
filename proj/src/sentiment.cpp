#include "hybridcast/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <sys/wait.h>
#include <unistd.h>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::sentiment {

std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::positive: return "POSITIVE";
    case Tag::negative: return "NEGATIVE";
    case Tag::neutral: return "NEUTRAL";
  }
  return "?";
}

Tag parse_tag(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "POSITIVE") return Tag::positive;
  if (upper == "NEGATIVE") return Tag::negative;
  if (upper == "NEUTRAL" || upper == "NEURAL") return Tag::neutral;
  throw DataError("unknown sentiment tag '" + std::string(text) + "'");
}

Lexicon load_lexicon(std::string_view text) {
  Lexicon lex;
  const auto lines = csv::lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab + 2 != line.size()) {
      throw DataError("lexicon line " + std::to_string(i + 1) + ": expected word<TAB>+ or word<TAB>-");
    }
    const auto words = tokenize(line.substr(0, tab));
    if (words.size() != 1) {
      throw DataError("lexicon line " + std::to_string(i + 1) + ": entry must be a single word");
    }
    const char polarity = line[tab + 1];
    if (polarity == '+') {
      lex.positive.insert(words.front());
    } else if (polarity == '-') {
      lex.negative.insert(words.front());
    } else {
      throw DataError("lexicon line " + std::to_string(i + 1) + ": polarity must be + or -");
    }
    if (lex.positive.count(words.front()) && lex.negative.count(words.front())) {
      throw DataError("lexicon line " + std::to_string(i + 1) + ": '" + words.front() + "' has both polarities");
    }
  }
  return lex;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (u < 0x80 && std::isalpha(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SentimentLabel LexiconScorer::score(std::string_view text) const {
  long pos = 0;
  long neg = 0;
  for (const std::string& tok : tokenize(text)) {
    if (lexicon_.positive.count(tok) != 0) ++pos;
    if (lexicon_.negative.count(tok) != 0) ++neg;
  }
  const long net = pos - neg;
  const double confidence = static_cast<double>(std::abs(net)) / static_cast<double>(std::max(1L, pos + neg));
  if (net > 0) return {Tag::positive, confidence};
  if (net < 0) return {Tag::negative, confidence};
  return {Tag::neutral, 0.0};
}

std::string truncate_tokens(std::string_view text, std::size_t max_tokens) {
  std::string out;
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size() && count < max_tokens) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (!out.empty()) out.push_back(' ');
    out.append(text.substr(i, j - i));
    ++count;
    i = j;
  }
  return out;
}

ProcessScorer::ProcessScorer(const std::string& command) {
  // A dead child must surface as an EPIPE error, not kill the host process.
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw DataError("scorer: pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw DataError("scorer: pipe() failed");
  }
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw DataError("scorer: fork() failed");
  }
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

ProcessScorer::~ProcessScorer() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

SentimentLabel ProcessScorer::score(std::string_view text) const {
  std::lock_guard lock(mutex_);
  std::string request = truncate_tokens(text, kMaxTokens);
  request.push_back('\n');
  std::size_t written = 0;
  while (written < request.size()) {
    const ssize_t n = write(to_child_, request.data() + written, request.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw DataError(std::string("scorer: write failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  std::size_t newline;
  while ((newline = pending_.find('\n')) == std::string::npos) {
    char buf[4096];
    const ssize_t n = read(from_child_, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw DataError("scorer: child closed its output");
    pending_.append(buf, static_cast<std::size_t>(n));
  }
  std::string line = pending_.substr(0, newline);
  pending_.erase(0, newline + 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto tab = line.find('\t');
  if (tab == std::string::npos) throw DataError("scorer: expected TAG<TAB>confidence, got '" + line + "'");
  SentimentLabel label{parse_tag(line.substr(0, tab)), csv::parse_double(line.substr(tab + 1), "confidence")};
  if (!(label.confidence >= 0.0 && label.confidence <= 1.0)) {
    throw DataError("scorer: confidence outside [0, 1]: " + line);
  }
  return label;
}

double signed_score(const SentimentLabel& label) {
  return label.tag == Tag::negative ? -label.confidence : label.confidence;
}

std::vector<ScoredArticle> score_articles(const std::vector<news::NewsArticle>& articles,
                                          const SentimentScorer& scorer, const news::SourceWeightRegistry& registry) {
  std::vector<ScoredArticle> out;
  out.reserve(articles.size());
  for (const news::NewsArticle& a : articles) {
    ScoredArticle s;
    s.article = a;
    s.label = scorer.score(news::prepare_text(a));
    s.signed_score = signed_score(s.label);
    s.weight = registry.weight(a.source_name);
    out.push_back(std::move(s));
  }
  return out;
}

double weighted_cumulative(std::span<const ScoredArticle> scored) {
  if (scored.empty()) throw DataError("weighted cumulative score of an empty article list");
  double num = 0.0;
  double den = 0.0;
  double lo = scored.front().signed_score;
  double hi = lo;
  for (const ScoredArticle& s : scored) {
    if (!(s.weight > 0.0)) throw DataError("article weight must be > 0");
    num += s.weight * s.signed_score;
    den += s.weight;
    lo = std::min(lo, s.signed_score);
    hi = std::max(hi, s.signed_score);
  }
  return std::clamp(num / den, lo, hi);
}

Granularity parse_granularity(std::string_view text) {
  if (text == "day") return Granularity::day;
  if (text == "hour") return Granularity::hour;
  throw ConfigError("unknown granularity '" + std::string(text) + "' (expected day or hour)");
}

std::vector<SentimentInterval> bucket_by_interval(std::span<const ScoredArticle> scored, Granularity granularity) {
  using namespace std::chrono;
  const seconds width = granularity == Granularity::day ? seconds{days{1}} : seconds{hours{1}};
  auto bucket_of = [&](Timestamp ts) {
    return granularity == Granularity::day ? Timestamp{floor<days>(ts)} : floor<hours>(ts);
  };
  std::vector<const ScoredArticle*> sorted;
  sorted.reserve(scored.size());
  for (const ScoredArticle& s : scored) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(), [&](const ScoredArticle* a, const ScoredArticle* b) {
    return bucket_of(a->article.published_at) < bucket_of(b->article.published_at);
  });
  std::vector<SentimentInterval> out;
  std::vector<ScoredArticle> members;
  for (std::size_t i = 0; i < sorted.size();) {
    const Timestamp start = bucket_of(sorted[i]->article.published_at);
    members.clear();
    while (i < sorted.size() && bucket_of(sorted[i]->article.published_at) == start) {
      members.push_back(*sorted[i]);
      ++i;
    }
    out.push_back({start, start + width, weighted_cumulative(members), members.size()});
  }
  return out;
}

std::string scored_csv(std::span<const ScoredArticle> scored) {
  std::string out = "published_at,source,weight,tag,confidence,signed_score\n";
  for (const ScoredArticle& s : scored) {
    out += format_timestamp(s.article.published_at) + ',' + csv::quote(s.article.source_name) + ',' +
           csv::shortest(s.weight) + ',' + std::string(tag_name(s.label.tag)) + ',' +
           csv::shortest(s.label.confidence) + ',' + csv::shortest(s.signed_score) + '\n';
  }
  return out;
}

std::string write_intervals(std::span<const SentimentInterval> intervals) {
  std::string out = "start,end,w_cs,count\n";
  for (const SentimentInterval& iv : intervals) {
    out += format_timestamp(iv.start) + ',' + format_timestamp(iv.end) + ',' + csv::shortest(iv.w_cs) + ',' +
           std::to_string(iv.article_count) + '\n';
  }
  return out;
}

std::vector<SentimentInterval> read_intervals(std::string_view csv_text) {
  const auto lines = csv::lines(csv_text);
  if (lines.empty() || lines.front() != "start,end,w_cs,count") {
    throw DataError("sentiment CSV must start with header 'start,end,w_cs,count'");
  }
  std::vector<SentimentInterval> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      const auto f = csv::split_record(lines[i]);
      if (f.size() != 4) throw DataError("expected 4 fields");
      SentimentInterval iv{parse_timestamp(f[0]), parse_timestamp(f[1]), csv::parse_double(f[2], "w_cs"),
                           static_cast<std::size_t>(csv::parse_double(f[3], "count"))};
      if (!(iv.end > iv.start) || !(iv.w_cs >= -1.0 && iv.w_cs <= 1.0) || iv.article_count < 1) {
        throw DataError("invalid interval");
      }
      out.push_back(iv);
    } catch (const DataError& e) {
      throw DataError("sentiment line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hybridcast::sentiment
