#include "ltldstar/baselines.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "ltldstar/errors.hpp"

namespace ltldstar {
namespace {

struct HeapItem {
  Weight d;
  StateId s;
  bool operator>(const HeapItem& o) const { return d != o.d ? d > o.d : s > o.s; }
};
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

/// Forward distances from `sources` (each at distance 0).
std::vector<Weight> forward_dijkstra(const Digraph& g, std::span<const StateId> sources) {
  std::vector<Weight> dist(g.num_nodes(), Weight::infinity());
  MinHeap heap;
  for (auto s : sources) {
    dist[s] = Weight::zero();
    heap.push({Weight::zero(), s});
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (auto e : g.out(u)) {
      const auto& edge = g.edge(e);
      const Weight nd = d + edge.weight;
      if (nd < dist[edge.to]) {
        dist[edge.to] = nd;
        heap.push({nd, edge.to});
      }
    }
  }
  return dist;
}

/// Cheapest cycle through `acc`: min over in-edges (s, acc) of d(acc, s) + w.
Weight forward_loop(const Digraph& g, StateId acc) {
  Weight best = Weight::infinity();
  bool any = false;
  for (auto e : g.in(acc)) any = any || g.edge(e).weight.is_finite();
  if (!any) return best;
  std::unordered_map<StateId, Weight> dist{{acc, Weight::zero()}};
  MinHeap heap;
  heap.push({Weight::zero(), acc});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (!(d < best)) break;
    if (d != dist[u]) continue;
    for (auto e : g.out(u)) {
      const auto& edge = g.edge(e);
      const Weight nd = d + edge.weight;
      if (edge.to == acc) {
        best = min(best, nd);
        continue;
      }
      auto it = dist.find(edge.to);
      if (it == dist.end() || nd < it->second) {
        dist[edge.to] = nd;
        heap.push({nd, edge.to});
      }
    }
  }
  return best;
}

void finish_oracle(OracleResult& r, std::int64_t beta) {
  for (std::size_t k = 0; k < r.prefix.size(); ++k) {
    const Weight total = r.prefix[k] + r.loop[k].scaled(beta);
    if (total.is_finite() && total < r.best_total) {
      r.best_total = total;
      r.best = k;
    }
  }
}

/// Backward single-goal search over the product plus one virtual goal node
/// (id = n) whose in-edges are given explicitly. Mirrors the planner's
/// D* Lite instances, so greedy extraction gives the same canonical path.
class BackwardSearch {
 public:
  explicit BackwardSearch(const Digraph& g) : g_(g), goal_(static_cast<StateId>(g.num_nodes())) {
    dist_.assign(g.num_nodes() + 1, Weight::infinity());
  }

  StateId goal() const { return goal_; }

  /// `goal_in` lists (s, w) for virtual edges s -> goal. Settles nodes until
  /// every target is popped and no cheaper-or-equal node remains.
  std::size_t run(std::vector<std::pair<StateId, Weight>> goal_in, std::span<const StateId> targets) {
    for (auto s : touched_) dist_[s] = Weight::infinity();
    touched_.clear();
    goal_in_.clear();
    for (const auto& [s, w] : goal_in) goal_in_[s] = w;
    std::unordered_set<StateId> pending(targets.begin(), targets.end());

    MinHeap heap;
    set(goal_, Weight::zero());
    heap.push({Weight::zero(), goal_});
    std::size_t pops = 0;
    Weight stop = Weight::infinity();
    bool stopping = false;
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      if (stopping && d > stop) break;
      heap.pop();
      if (d != dist_[u]) continue;
      ++pops;
      if (pending.erase(u) && pending.empty()) {
        stopping = true;
        stop = d;
      }
      auto relax = [&](StateId s, Weight w) {
        const Weight nd = d + w;
        if (nd < dist_[s]) {
          set(s, nd);
          heap.push({nd, s});
        }
      };
      if (u == goal_) {
        for (const auto& [s, w] : goal_in) relax(s, w);
      } else {
        for (auto e : g_.in(u)) relax(g_.edge(e).from, g_.edge(e).weight);
      }
    }
    return pops;
  }

  Weight dist(StateId s) const { return dist_[s]; }

  /// Greedy descent: argmin g(v) + w, ties to the lowest id.
  std::vector<StateId> extract(StateId from) const {
    if (dist_[from].is_infinite()) throw UsageError("path requested from unreachable state");
    std::vector<StateId> path{from};
    StateId s = from;
    while (s != goal_) {
      StateId next = kNoState;
      Weight best = Weight::infinity();
      auto consider = [&](StateId v, Weight w) {
        const Weight cand = dist_[v] + w;
        if (cand < best || (cand == best && cand.is_finite() && v < next)) {
          best = cand;
          next = v;
        }
      };
      for (auto e : g_.out(s)) consider(g_.edge(e).to, g_.edge(e).weight);
      if (auto it = goal_in_.find(s); it != goal_in_.end()) consider(goal_, it->second);
      if (next == kNoState || path.size() > g_.num_nodes() + 1) {
        throw UsageError("path extraction failed");
      }
      path.push_back(next);
      s = next;
    }
    return path;
  }

 private:
  void set(StateId s, Weight w) {
    if (dist_[s].is_infinite()) touched_.push_back(s);
    dist_[s] = w;
  }

  const Digraph& g_;
  StateId goal_;
  std::vector<Weight> dist_;
  std::vector<StateId> touched_;
  std::unordered_map<StateId, Weight> goal_in_;
};

std::uint64_t pair_key(StateId a, StateId b) { return (std::uint64_t{a} << 32) | b; }

/// Cheapest detour from seg[0] (at least one edge) that rejoins seg at an
/// index j >= 1 and follows seg to its end. Empty if none is finite.
/// `rejoin` receives the position of seg[j] in the result.
std::vector<StateId> detour(const Digraph& g, const std::vector<StateId>& seg,
                            std::size_t* expansions, std::size_t* rejoin = nullptr) {
  const std::size_t m = seg.size();
  std::vector<Weight> rest(m, Weight::zero());
  for (std::size_t j = m - 1; j-- > 0;) {
    rest[j] = path_weight(g, std::span<const StateId>(seg).subspan(j, 2)) + rest[j + 1];
  }
  std::unordered_map<StateId, std::vector<std::size_t>> index_of;
  for (std::size_t j = 1; j < m; ++j) index_of[seg[j]].push_back(j);

  std::unordered_map<StateId, std::pair<Weight, StateId>> label;  // dist, parent
  MinHeap heap;
  const StateId src = seg.front();
  for (auto e : g.out(src)) {
    const auto& edge = g.edge(e);
    if (edge.weight.is_infinite()) continue;
    auto it = label.find(edge.to);
    if (it == label.end() || edge.weight < it->second.first) {
      label[edge.to] = {edge.weight, src};
      heap.push({edge.weight, edge.to});
    }
  }
  Weight best = Weight::infinity();
  std::size_t best_j = 0;
  std::unordered_set<StateId> done;
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (!(d < best)) break;
    if (!done.insert(u).second) continue;
    ++*expansions;
    if (auto it = index_of.find(u); it != index_of.end()) {
      for (auto j : it->second) {
        const Weight c = d + rest[j];
        if (c < best || (c == best && j < best_j)) {
          best = c;
          best_j = j;
        }
      }
    }
    if (u == src) continue;  // a cycle back to the source does not extend further
    for (auto e : g.out(u)) {
      const auto& edge = g.edge(e);
      const Weight nd = d + edge.weight;
      if (nd.is_infinite()) continue;
      auto it = label.find(edge.to);
      if (it == label.end() || nd < it->second.first) {
        label[edge.to] = {nd, u};
        heap.push({nd, edge.to});
      }
    }
  }
  if (best.is_infinite()) return {};
  std::vector<StateId> path{seg[best_j]};
  for (StateId v = seg[best_j];;) {
    v = label.at(v).second;
    path.push_back(v);
    if (v == src) break;
  }
  std::reverse(path.begin(), path.end());
  if (rejoin) *rejoin = path.size() - 1;
  path.insert(path.end(), seg.begin() + static_cast<std::ptrdiff_t>(best_j) + 1, seg.end());
  return path;
}

bool touches(const std::vector<StateId>& path, const std::unordered_set<std::uint64_t>& changed,
             std::size_t from = 0) {
  for (std::size_t i = from; i + 1 < path.size(); ++i) {
    if (changed.count(pair_key(path[i], path[i + 1]))) return true;
  }
  return false;
}

Run finish_run(const Digraph& g, std::vector<StateId> prefix, std::vector<StateId> suffix,
               std::size_t k, std::int64_t beta) {
  Run run;
  run.prefix = std::move(prefix);
  run.suffix = std::move(suffix);
  run.accepting_index = k;
  run.prefix_cost = path_weight(g, run.prefix);
  run.suffix_cost = path_weight(g, run.suffix);
  run.total = total_cost(run, beta);
  return run;
}

}  // namespace

OracleResult dijkstra_oracle(const ProductAutomaton& pa, std::span<const StateId> starts,
                             std::int64_t beta) {
  const auto& g = pa.graph();
  const auto dist = forward_dijkstra(g, starts);
  OracleResult r;
  for (auto acc : pa.accepting_states()) {
    r.prefix.push_back(dist[acc]);
    r.loop.push_back(dist[acc].is_finite() ? forward_loop(g, acc) : Weight::infinity());
  }
  finish_oracle(r, beta);
  return r;
}

OracleResult bellman_ford_oracle(const ProductAutomaton& pa, std::span<const StateId> starts,
                                 std::int64_t beta) {
  const auto& g = pa.graph();
  auto relax_all = [&](std::vector<Weight>& dist) {
    for (std::size_t round = 0; round < g.num_nodes(); ++round) {
      bool changed = false;
      for (const auto& e : g.edges()) {
        const Weight nd = dist[e.from] + e.weight;
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          changed = true;
        }
      }
      if (!changed) break;
    }
  };
  std::vector<Weight> dist(g.num_nodes(), Weight::infinity());
  for (auto s : starts) dist[s] = Weight::zero();
  relax_all(dist);

  OracleResult r;
  for (auto acc : pa.accepting_states()) {
    r.prefix.push_back(dist[acc]);
    // Paths of >= 1 edge from acc: seed with acc's out-edges.
    std::vector<Weight> d(g.num_nodes(), Weight::infinity());
    for (auto e : g.out(acc)) d[g.edge(e).to] = min(d[g.edge(e).to], g.edge(e).weight);
    relax_all(d);
    r.loop.push_back(d[acc]);
  }
  finish_oracle(r, beta);
  return r;
}

Run dijkstra_plan(const ProductAutomaton& pa, std::span<const StateId> starts, std::int64_t beta,
                  std::size_t* expansions) {
  if (starts.empty()) throw UsageError("no start state");
  const auto& g = pa.graph();
  BackwardSearch search(g);
  std::size_t pops = 0;

  const auto& accepting = pa.accepting_states();
  std::vector<Weight> loop_cost(accepting.size(), Weight::infinity());
  std::vector<std::vector<StateId>> loops(accepting.size());
  for (std::size_t k = 0; k < accepting.size(); ++k) {
    const StateId acc = accepting[k];
    std::vector<std::pair<StateId, Weight>> mirrored;
    bool any = false;
    for (auto e : g.in(acc)) {
      mirrored.emplace_back(g.edge(e).from, g.edge(e).weight);
      any = any || g.edge(e).weight.is_finite();
    }
    if (!any) continue;
    const StateId target[] = {acc};
    pops += search.run(std::move(mirrored), target);
    loop_cost[k] = search.dist(acc);
    if (loop_cost[k].is_infinite()) continue;
    loops[k] = search.extract(acc);
    loops[k].back() = acc;
  }

  std::vector<std::pair<StateId, Weight>> to_goal;
  for (std::size_t k = 0; k < accepting.size(); ++k) {
    if (loop_cost[k].is_finite()) to_goal.emplace_back(accepting[k], loop_cost[k].scaled(beta));
  }
  pops += search.run(std::move(to_goal), starts);
  if (expansions) *expansions = pops;

  // A synthetic start has zero-weight edges to every start: pick the best
  // start, ties to the lowest id.
  StateId start = kNoState;
  for (auto s : starts) {
    if (start == kNoState || search.dist(s) < search.dist(start) ||
        (search.dist(s) == search.dist(start) && s < start)) {
      start = s;
    }
  }
  if (search.dist(start).is_infinite()) throw NoAcceptingRun();
  auto prefix = search.extract(start);
  prefix.pop_back();
  const StateId acc = prefix.back();
  const auto k = static_cast<std::size_t>(
      std::lower_bound(accepting.begin(), accepting.end(), acc) - accepting.begin());
  return finish_run(g, std::move(prefix), loops[k], k, beta);
}

// --- iterative --------------------------------------------------------------

IterativeReplanner::IterativeReplanner(ProductAutomaton pa, PlannerOptions options)
    : pa_(std::move(pa)), options_(std::move(options)) {
  if (options_.beta < 1) throw UsageError("beta must be >= 1");
}

Run IterativeReplanner::plan_initial(std::span<const StateId> starts) {
  run_ = dijkstra_plan(pa_, starts, options_.beta, &expansions_);
  cursor_ = 0;
  return run_;
}

Run IterativeReplanner::replan(std::span<const WtsChange> changes, StateId current) {
  for (const auto& c : changes) pa_.apply(c);
  const StateId start[] = {current};
  run_ = dijkstra_plan(pa_, start, options_.beta, &expansions_);
  cursor_ = 0;
  return run_;
}

// --- local revision -----------------------------------------------------------

LocalRevisionReplanner::LocalRevisionReplanner(ProductAutomaton pa, PlannerOptions options)
    : pa_(std::move(pa)), options_(std::move(options)) {
  if (options_.beta < 1) throw UsageError("beta must be >= 1");
}

Run LocalRevisionReplanner::plan_initial(std::span<const StateId> starts) {
  run_ = dijkstra_plan(pa_, starts, options_.beta, &expansions_);
  cursor_ = 0;
  fallbacks_ = 0;
  return run_;
}

Run LocalRevisionReplanner::replan(std::span<const WtsChange> changes, StateId current) {
  std::unordered_set<std::uint64_t> changed;
  for (const auto& c : changes) {
    for (const auto& m : pa_.apply(c)) changed.insert(pair_key(m.from, m.to));
  }
  const auto& g = pa_.graph();
  expansions_ = 0;

  // Remaining part of the run in the current phase, starting at `current`.
  std::vector<StateId> seg;
  if (!run_.in_suffix(cursor_)) {
    seg.assign(run_.prefix.begin() + static_cast<std::ptrdiff_t>(cursor_), run_.prefix.end());
  } else {
    const std::size_t period = run_.suffix.size() - 1;
    const std::size_t p = (cursor_ - (run_.prefix.size() - 1)) % period;
    seg.assign(run_.suffix.begin() + static_cast<std::ptrdiff_t>(p), run_.suffix.end());
  }
  if (seg.empty() || seg.front() != current) throw UsageError("current state is not on the run");

  auto fallback = [&]() {
    ++fallbacks_;
    const StateId start[] = {current};
    std::size_t pops = 0;
    run_ = dijkstra_plan(pa_, start, options_.beta, &pops);
    expansions_ += pops;
    cursor_ = 0;
    return run_;
  };

  if (touches(seg, changed)) {
    seg = detour(g, seg, &expansions_);
    if (seg.empty()) return fallback();
  }

  // Loop repair: detour from the tail of each changed edge in turn.
  std::vector<StateId> loop = run_.suffix;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    if (!changed.count(pair_key(loop[i], loop[i + 1]))) continue;
    std::vector<StateId> tail(loop.begin() + static_cast<std::ptrdiff_t>(i), loop.end());
    std::size_t rejoin = 0;
    auto repaired = detour(g, tail, &expansions_, &rejoin);
    if (repaired.empty()) return fallback();
    loop.resize(i);
    loop.insert(loop.end(), repaired.begin(), repaired.end());
    // Resume scanning at the rejoin point; the detour itself is current.
    i += rejoin - 1;
  }

  run_ = finish_run(g, std::move(seg), std::move(loop), run_.accepting_index, options_.beta);
  if (run_.total.is_infinite()) return fallback();
  cursor_ = 0;
  return run_;
}

}  // namespace ltldstar
