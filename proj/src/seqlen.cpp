#include "hybridcast/seqlen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast::seqlen {

void SearchConfig::validate() const {
  if (min_length < 2) throw ConfigError("minimum window length must be >= 2");
  if (max_length < min_length) throw ConfigError("window length bounds are empty");
  if (initial_length < min_length || initial_length > max_length) {
    throw ConfigError("initial length " + std::to_string(initial_length) + " outside [" +
                      std::to_string(min_length) + ", " + std::to_string(max_length) + "]");
  }
  if (!(initial_step >= 1.0)) throw ConfigError("initial step must be >= 1");
  if (!(threshold > 0.0)) throw ConfigError("performance threshold must be > 0");
  if (!(reduction > 0.0 && reduction < 1.0)) throw ConfigError("reduction factor must lie in (0, 1)");
  if (!(min_step >= 1.0)) throw ConfigError("minimum step must be >= 1");
  if (max_iterations < 1) throw ConfigError("max iterations must be >= 1");
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::increase: return "increase";
    case Action::decrease: return "decrease";
    case Action::shrink_step: return "shrink-step";
    case Action::stop: return "stop";
  }
  return "?";
}

namespace {

class Memo {
 public:
  explicit Memo(const Evaluator& f) : f_(f) {}

  double operator()(int length) {
    auto it = cache_.find(length);
    if (it != cache_.end()) return it->second;
    double p = 0.0;
    try {
      p = f_(length);
    } catch (const std::exception& e) {
      throw DataError("performance evaluation failed at L=" + std::to_string(length) + ": " + e.what());
    }
    if (!std::isfinite(p)) {
      throw DataError("performance evaluation returned a non-finite value at L=" + std::to_string(length));
    }
    cache_.emplace(length, p);
    order_.push_back(length);
    return p;
  }

  std::size_t size() const { return cache_.size(); }

  std::pair<int, double> best() const {
    int best_l = order_.front();
    double best_p = cache_.at(best_l);
    for (int l : order_) {
      if (cache_.at(l) > best_p) {
        best_p = cache_.at(l);
        best_l = l;
      }
    }
    return {best_l, best_p};
  }

 private:
  const Evaluator& f_;
  std::map<int, double> cache_;
  std::vector<int> order_;
};

int offset(double step) { return std::max(1, static_cast<int>(std::lround(step))); }

}  // namespace

SearchResult search_optimal_length(const Evaluator& evaluate, const SearchConfig& config) {
  config.validate();
  Memo perf(evaluate);
  SearchResult result;

  int length = config.initial_length;
  double step = config.initial_step;
  double current = perf(length);
  std::set<std::pair<int, double>> visited;

  for (std::size_t t = 0; t < config.max_iterations; ++t) {
    TraceEntry entry{t, length, current, step, Action::stop, false};

    if (!visited.insert({length, step}).second) {
      // cycling between the same states: the basic rules alone would never leave
      step *= config.reduction;
      visited.clear();
      entry.action = step < config.min_step ? Action::stop : Action::shrink_step;
      result.trace.push_back(entry);
      if (entry.action == Action::stop) break;
      continue;
    }

    const int raw_probe = length + offset(step);
    const int probe = std::min(raw_probe, config.max_length);
    entry.clamped = probe != raw_probe;
    const bool stuck = probe == length;
    const double delta = stuck ? -std::numeric_limits<double>::infinity() : perf(probe) - current;

    if (delta > config.threshold) {
      entry.action = Action::increase;
      length = probe;
      current = perf(length);
    } else if (delta < -config.threshold) {
      entry.action = Action::decrease;
      const int raw_down = length - offset(step);
      const int down = std::max(raw_down, config.min_length);
      entry.clamped = entry.clamped || down != raw_down;
      length = down;
      current = perf(length);
    } else {
      step *= config.reduction;
      if (step < config.min_step) {
        entry.action = Action::stop;
        result.trace.push_back(entry);
        break;
      }
      entry.action = Action::shrink_step;
    }
    result.trace.push_back(entry);
  }

  const auto [best_l, best_p] = perf.best();
  result.best_length = best_l;
  result.best_performance = best_p;
  result.evaluations = perf.size();
  return result;
}

std::string trace_csv(const SearchTrace& trace) {
  std::string out = "iter,L,perf,step,action\n";
  for (const TraceEntry& e : trace) {
    out += std::to_string(e.iteration) + ',' + std::to_string(e.length) + ',' + csv::shortest(e.performance) + ',' +
           csv::shortest(e.step) + ',' + std::string(action_name(e.action)) + '\n';
  }
  return out;
}

}  // namespace hybridcast::seqlen
