#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hybridcast::seqlen {

struct SearchConfig {
  int initial_length = 8;     // L0
  double initial_step = 8.0;  // dL0
  double threshold = 1e-3;    // eta, in performance units
  double reduction = 0.5;     // alpha
  double min_step = 1.0;      // epsilon
  int min_length = 2;
  int max_length = 64;
  std::size_t max_iterations = 100;

  void validate() const;
};

enum class Action { increase, decrease, shrink_step, stop };
std::string_view action_name(Action a);

struct TraceEntry {
  std::size_t iteration = 0;
  int length = 0;           // L_t
  double performance = 0.0; // P(L_t)
  double step = 0.0;        // dL_t
  Action action = Action::stop;
  bool clamped = false;     // the move or probe was clipped to [min_length, max_length]
};

using SearchTrace = std::vector<TraceEntry>;

struct SearchResult {
  int best_length = 0;
  double best_performance = 0.0;
  SearchTrace trace;
  std::size_t evaluations = 0;  // distinct lengths evaluated
};

/// Higher is better. Must be deterministic in L; results are memoized per L.
using Evaluator = std::function<double(int)>;

/// Adaptive step search for the window length. Each iteration probes L_t + dL_t:
///   P(probe) > P(L_t) + eta        -> L_{t+1} = probe
///   P(probe) < P(L_t) - eta        -> L_{t+1} = L_t - dL_t
///   |P(probe) - P(L_t)| < eta      -> dL_{t+1} = alpha * dL_t, stop once dL < epsilon
/// A probe that cannot leave the upper bound counts as a degradation. Revisiting a
/// (L, dL) state forces a step shrink. Returns the best length seen, earliest on ties.
SearchResult search_optimal_length(const Evaluator& evaluate, const SearchConfig& config);

/// CSV `iter,L,perf,step,action`.
std::string trace_csv(const SearchTrace& trace);

}  // namespace hybridcast::seqlen
