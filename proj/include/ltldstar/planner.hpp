#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "ltldstar/dstar_lite.hpp"
#include "ltldstar/product.hpp"

namespace ltldstar {

/// Sum of edge weights along consecutive states (cheapest parallel edge).
/// Infinite if some step has no finite edge.
Weight path_weight(const Digraph& graph, std::span<const StateId> path);

/// Optimal loop through one accepting state, found by searching from the
/// accepting state to an imaginary copy of it.
class SuffixRecord {
 public:
  std::size_t k() const { return k_; }
  StateId accepting_state() const { return acc_; }
  /// acc ... acc (>= 1 edge), empty if no cycle exists.
  const std::vector<StateId>& loop() const { return loop_; }
  /// Weight of one traversal of the loop; infinity iff no cycle.
  Weight cost() const { return cost_; }
  const DStarLite& instance() const { return *search_; }
  StateId imaginary_goal() const { return img_; }
  /// False while the accepting state has never had a finite incoming edge; such
  /// an instance can only change through a mod edge into the accepting state.
  bool live() const { return live_; }

 private:
  friend SuffixRecord suffix_initialize(ProductAutomaton& pa, std::size_t k);
  friend bool suffix_replan(SuffixRecord& record, std::span<const PaEdgeChange> mod);

  void retrieve();

  std::size_t k_ = 0;
  StateId acc_ = kNoState;
  StateId img_ = kNoState;
  std::unique_ptr<DStarLite> search_;
  std::vector<StateId> loop_;
  Weight cost_ = Weight::infinity();
  bool live_ = false;
};

/// Builds the imaginary goal for accepting state k (position in
/// pa.accepting_states()) and computes its optimal loop.
SuffixRecord suffix_initialize(ProductAutomaton& pa, std::size_t k);

/// Mirrors mod edges into the accepting state onto the imaginary goal, updates
/// the affected vertices and recomputes. `mod` must already be applied to the
/// product graph. Returns true iff the loop cost changed.
bool suffix_replan(SuffixRecord& record, std::span<const PaEdgeChange> mod);

/// Prefix-suffix run. prefix.back() == suffix.front() == suffix.back().
struct Run {
  std::vector<StateId> prefix;
  std::vector<StateId> suffix;
  Weight prefix_cost;
  Weight suffix_cost;
  Weight total;
  std::size_t accepting_index = 0;  // k of the chosen accepting state

  StateId accepting_state() const { return prefix.back(); }
  /// State at position i of the unrolled run prefix, suffix, suffix, ...
  StateId state_at(std::size_t i) const;
  bool in_suffix(std::size_t i) const { return i + 1 >= prefix.size(); }
};

/// weight(prefix) + beta * weight(suffix), componentwise.
Weight total_cost(const Run& run, std::int64_t beta);

enum class Phase { kPrefix, kSuffix };

struct PlannerOptions {
  std::int64_t beta = 10;
  /// Travel lower bound between two WTS states (grid: min cost x Manhattan).
  /// Empty means h = 0.
  std::function<std::int64_t(std::size_t, std::size_t)> wts_heuristic;
  /// Worker threads for the independent suffix replans.
  unsigned threads = 1;
};

struct ReplanStats {
  std::size_t expansions = 0;
  std::size_t suffix_expansions = 0;
  std::size_t main_expansions = 0;
  std::size_t suffix_costs_changed = 0;
  Phase phase = Phase::kPrefix;
};

class Planner {
 public:
  Planner(ProductAutomaton pa, PlannerOptions options);
  Planner(const Planner&) = delete;
  Planner& operator=(const Planner&) = delete;

  const ProductAutomaton& pa() const { return pa_; }
  std::int64_t beta() const { return options_.beta; }
  const std::vector<SuffixRecord>& suffixes() const { return suffixes_; }
  const DStarLite& main_search() const { return *main_; }

  /// Plans from the given product states (several: synthetic zero-cost start).
  /// Throws NoAcceptingRun.
  Run plan_initial(std::span<const StateId> starts);
  Run plan_initial() { return plan_initial(pa_.initial_states()); }

  /// Applies `mod` (from map_wts_change) and replans from `new_start`.
  /// Throws NoAcceptingRun; the planner then stays usable for later events.
  Run replan(std::span<const PaEdgeChange> mod, StateId new_start);
  /// Maps, applies and replans for a batch of WTS changes.
  Run replan(std::span<const WtsChange> changes, StateId new_start);

  /// Robot bookkeeping along the current run.
  const Run& run() const { return run_; }
  bool has_run() const { return has_run_; }
  std::size_t cursor() const { return cursor_; }
  StateId current_state() const;
  StateId next_state() const { return run_.state_at(cursor_ + 1); }
  void advance() { ++cursor_; }
  Phase phase() const;

  const ReplanStats& last_stats() const { return last_stats_; }

 private:
  std::int64_t heuristic(StateId a, StateId b) const;
  void wire_suffix_costs();
  Run extract_run();

  ProductAutomaton pa_;
  PlannerOptions options_;
  std::vector<SuffixRecord> suffixes_;
  std::unordered_map<StateId, std::size_t> k_of_;
  std::unique_ptr<DStarLite> main_;
  StateId img_ = kNoState;
  StateId synthetic_start_ = kNoState;
  Run run_;
  bool has_run_ = false;
  std::size_t cursor_ = 0;
  ReplanStats last_stats_;
};

}  // namespace ltldstar
