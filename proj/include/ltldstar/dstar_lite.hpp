#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "ltldstar/digraph.hpp"
#include "ltldstar/weight.hpp"

namespace ltldstar {

/// h(start, s): travel-unit estimate of the cost from the search start to s.
using Heuristic = std::function<std::int64_t(StateId start, StateId s)>;

/// A shared base graph plus instance-private virtual nodes (imaginary goals,
/// synthetic starts). Virtual node ids follow the base node ids.
class SearchGraph {
 public:
  explicit SearchGraph(Digraph& base) : base_(&base) {}

  Digraph& base() const { return *base_; }
  std::size_t num_nodes() const { return base_->num_nodes() + num_virtual_; }
  bool is_virtual(StateId s) const { return s >= base_->num_nodes(); }

  StateId add_virtual_node();

  /// Creates or overwrites the edge; at least one endpoint must be virtual.
  void set_virtual_edge(StateId from, StateId to, Weight w);
  std::optional<Weight> virtual_edge(StateId from, StateId to) const;

  template <class F>
  void for_each_successor(StateId u, F&& f) const {
    if (!is_virtual(u)) {
      for (auto e : base_->out(u)) {
        const auto& edge = base_->edge(e);
        f(edge.to, edge.weight);
      }
    }
    if (auto it = vout_.find(u); it != vout_.end()) {
      for (const auto& ve : it->second) f(ve.other, ve.weight);
    }
  }

  template <class F>
  void for_each_predecessor(StateId v, F&& f) const {
    if (!is_virtual(v)) {
      for (auto e : base_->in(v)) {
        const auto& edge = base_->edge(e);
        f(edge.from, edge.weight);
      }
    }
    if (auto it = vin_.find(v); it != vin_.end()) {
      for (const auto& ve : it->second) f(ve.other, ve.weight);
    }
  }

 private:
  struct VirtualEdge {
    StateId other;
    Weight weight;
  };

  Digraph* base_;
  std::size_t num_virtual_ = 0;
  std::unordered_map<StateId, std::vector<VirtualEdge>> vout_;
  std::unordered_map<StateId, std::vector<VirtualEdge>> vin_;
};

/// Priority of a queued state: (min(g,rhs) + h + k_m, min(g,rhs)); heuristic
/// and k_m only ever touch the travel component.
struct Key {
  Weight k1 = Weight::infinity();
  Weight k2 = Weight::infinity();
  auto operator<=>(const Key&) const = default;
  bool operator==(const Key&) const = default;
};

/// A weight change on a base edge.
struct EdgeUpdate {
  EdgeId edge;
  Weight weight;
};

/// Incremental backward search from a fixed goal towards a moving start.
class DStarLite {
 public:
  struct Stats {
    std::size_t expansions = 0;   // over- and under-consistent expansions
    std::size_t reinserts = 0;    // stale-key reinsertions after k_m growth
    std::size_t vertex_updates = 0;
  };

  /// Invoked on every expansion with the state and min(g, rhs) before it.
  using PopObserver = std::function<void(StateId, Weight)>;

  DStarLite(SearchGraph graph, StateId start, StateId goal, Heuristic heuristic = {});

  /// Resets all estimates: rhs(goal) = 0, U = {goal}, k_m = 0.
  void initialize();

  Key calculate_key(StateId s) const;
  void update_vertex(StateId u);
  /// Returns the number of expansions performed by this call.
  std::size_t compute_shortest_path();

  /// Moves the search start, accumulating k_m += h(old start, new start).
  void move_start(StateId new_start);
  /// Sets base edge weights, adds `k_m_increment`, and updates affected vertices.
  void apply_edge_changes(std::span<const EdgeUpdate> mod, std::int64_t k_m_increment = 0);
  /// The weight of u -> v has already changed in the graph: refresh rhs(u).
  void notify_edge_changed(StateId u, StateId v);

  /// Greedy successor walk to the goal, ties broken by lowest state id.
  std::vector<StateId> extract_path(StateId from) const;

  Weight g(StateId s) const;
  Weight rhs(StateId s) const;
  bool consistent(StateId s) const { return g(s) == rhs(s); }
  std::int64_t heuristic(StateId s) const;

  StateId start() const { return start_; }
  StateId goal() const { return goal_; }
  std::int64_t k_m() const { return k_m_; }
  std::size_t queue_size() const;
  const Stats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  SearchGraph& graph() { return graph_; }
  const SearchGraph& graph() const { return graph_; }

  void set_pop_observer(PopObserver observer) { observer_ = std::move(observer); }

 private:
  struct Info {
    Weight g = Weight::infinity();
    Weight rhs = Weight::infinity();
    Key key;
    bool in_queue = false;
  };

  /// State table allocated in pages on first write; untouched states read as
  /// (inf, inf).
  class Table {
   public:
    const Info* find(StateId s) const;
    Info& at(StateId s);
    void clear() { pages_.clear(); }

   private:
    static constexpr std::size_t kPageBits = 6;
    static constexpr std::size_t kPageSize = std::size_t{1} << kPageBits;
    using Page = std::array<Info, kPageSize>;
    std::vector<std::unique_ptr<Page>> pages_;
  };

  struct QueueEntry {
    Key key;
    StateId state;
    bool operator>(const QueueEntry& o) const {
      if (key != o.key) return key > o.key;
      return state > o.state;
    }
  };

  void push(StateId s, Info& info);
  void drop_stale();
  Weight best_successor(StateId u) const;

  SearchGraph graph_;
  StateId start_;
  StateId goal_;
  Heuristic heuristic_;
  std::int64_t k_m_ = 0;
  Table table_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue_;
  std::size_t live_in_queue_ = 0;
  Stats stats_;
  PopObserver observer_;
};

}  // namespace ltldstar
