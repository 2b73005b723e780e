#include "ltldstar/dstar_lite.hpp"

#include <algorithm>

#include "ltldstar/errors.hpp"

namespace ltldstar {

StateId SearchGraph::add_virtual_node() {
  const auto id = static_cast<StateId>(base_->num_nodes() + num_virtual_);
  ++num_virtual_;
  return id;
}

void SearchGraph::set_virtual_edge(StateId from, StateId to, Weight w) {
  if (from >= num_nodes() || to >= num_nodes()) throw UsageError("virtual edge endpoint out of range");
  if (!is_virtual(from) && !is_virtual(to)) throw UsageError("virtual edge needs a virtual endpoint");
  auto upsert = [](std::vector<VirtualEdge>& list, StateId other, Weight weight) {
    for (auto& ve : list) {
      if (ve.other == other) {
        ve.weight = weight;
        return;
      }
    }
    list.push_back({other, weight});
  };
  upsert(vout_[from], to, w);
  upsert(vin_[to], from, w);
}

std::optional<Weight> SearchGraph::virtual_edge(StateId from, StateId to) const {
  auto it = vout_.find(from);
  if (it == vout_.end()) return std::nullopt;
  for (const auto& ve : it->second) {
    if (ve.other == to) return ve.weight;
  }
  return std::nullopt;
}

const DStarLite::Info* DStarLite::Table::find(StateId s) const {
  const std::size_t page = s >> kPageBits;
  if (page >= pages_.size() || !pages_[page]) return nullptr;
  return &(*pages_[page])[s & (kPageSize - 1)];
}

DStarLite::Info& DStarLite::Table::at(StateId s) {
  const std::size_t page = s >> kPageBits;
  if (page >= pages_.size()) pages_.resize(page + 1);
  if (!pages_[page]) pages_[page] = std::make_unique<Page>();
  return (*pages_[page])[s & (kPageSize - 1)];
}

DStarLite::DStarLite(SearchGraph graph, StateId start, StateId goal, Heuristic heuristic)
    : graph_(std::move(graph)), start_(start), goal_(goal), heuristic_(std::move(heuristic)) {
  if (start_ >= graph_.num_nodes() || goal_ >= graph_.num_nodes()) {
    throw UsageError("start/goal not in graph");
  }
  initialize();
}

void DStarLite::initialize() {
  table_.clear();
  queue_ = {};
  live_in_queue_ = 0;
  k_m_ = 0;
  Info& goal = table_.at(goal_);
  goal.rhs = Weight::zero();
  push(goal_, goal);
}

std::int64_t DStarLite::heuristic(StateId s) const {
  return heuristic_ ? heuristic_(start_, s) : 0;
}

Weight DStarLite::g(StateId s) const {
  const Info* i = table_.find(s);
  return i ? i->g : Weight::infinity();
}

Weight DStarLite::rhs(StateId s) const {
  const Info* i = table_.find(s);
  return i ? i->rhs : Weight::infinity();
}

Key DStarLite::calculate_key(StateId s) const {
  const Weight m = min(g(s), rhs(s));
  return {m.plus_travel(heuristic(s) + k_m_), m};
}

std::size_t DStarLite::queue_size() const { return live_in_queue_; }

void DStarLite::push(StateId s, Info& info) {
  info.key = calculate_key(s);
  if (!info.in_queue) ++live_in_queue_;
  info.in_queue = true;
  queue_.push({info.key, s});
}

void DStarLite::drop_stale() {
  while (!queue_.empty()) {
    const auto& top = queue_.top();
    const Info* i = table_.find(top.state);
    if (i && i->in_queue && i->key == top.key) return;
    queue_.pop();
  }
}

Weight DStarLite::best_successor(StateId u) const {
  Weight best = Weight::infinity();
  graph_.for_each_successor(u, [&](StateId v, Weight w) {
    if (w.is_infinite()) return;
    const Weight cand = g(v) + w;
    if (cand < best) best = cand;
  });
  return best;
}

void DStarLite::update_vertex(StateId u) {
  ++stats_.vertex_updates;
  if (u != goal_) {
    const Weight best = best_successor(u);
    if (best.is_infinite() && !table_.find(u)) return;  // untouched and still unreachable
    table_.at(u).rhs = best;
  }
  Info& info = table_.at(u);
  if (info.g != info.rhs) {
    push(u, info);
  } else if (info.in_queue) {
    info.in_queue = false;
    --live_in_queue_;
  }
}

std::size_t DStarLite::compute_shortest_path() {
  std::size_t expansions = 0;
  for (;;) {
    drop_stale();
    if (queue_.empty()) break;
    const QueueEntry top = queue_.top();
    const Info* start = table_.find(start_);
    const bool start_consistent = !start || start->g == start->rhs;
    if (!(top.key < calculate_key(start_)) && start_consistent) break;

    const StateId u = top.state;
    Info& info = table_.at(u);
    const Key k_new = calculate_key(u);
    if (top.key < k_new) {
      ++stats_.reinserts;
      push(u, info);
      continue;
    }
    queue_.pop();
    info.in_queue = false;
    --live_in_queue_;
    ++expansions;
    if (observer_) observer_(u, min(info.g, info.rhs));

    if (info.g > info.rhs) {
      info.g = info.rhs;
      const Weight g_u = info.g;
      graph_.for_each_predecessor(u, [&](StateId s, Weight w) {
        if (s == goal_ || w.is_infinite()) return;
        const Weight cand = g_u + w;
        Info& si = table_.at(s);
        if (cand < si.rhs) {
          si.rhs = cand;
          if (si.g != si.rhs) {
            push(s, si);
          } else if (si.in_queue) {
            si.in_queue = false;
            --live_in_queue_;
          }
        }
      });
    } else {
      const Weight g_old = info.g;
      info.g = Weight::infinity();
      std::vector<StateId> affected;
      graph_.for_each_predecessor(u, [&](StateId s, Weight w) {
        if (w.is_infinite()) return;
        if (rhs(s) == g_old + w) affected.push_back(s);
      });
      affected.push_back(u);
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      for (auto s : affected) update_vertex(s);
    }
  }
  stats_.expansions += expansions;
  return expansions;
}

void DStarLite::move_start(StateId new_start) {
  if (new_start >= graph_.num_nodes()) throw UsageError("start not in graph");
  k_m_ += heuristic_ ? heuristic_(start_, new_start) : 0;
  start_ = new_start;
}

void DStarLite::notify_edge_changed(StateId u, StateId v) {
  // A changed cost into a state with g = inf cannot change rhs(u) either way.
  if (g(v).is_infinite()) return;
  update_vertex(u);
}

void DStarLite::apply_edge_changes(std::span<const EdgeUpdate> mod, std::int64_t k_m_increment) {
  k_m_ += k_m_increment;
  auto& base = graph_.base();
  for (const auto& c : mod) {
    if (c.edge >= base.num_edges()) throw UnknownEdge("unknown edge in mod");
    base.set_weight(c.edge, c.weight);
  }
  for (const auto& c : mod) {
    const auto& e = base.edge(c.edge);
    notify_edge_changed(e.from, e.to);
  }
}

std::vector<StateId> DStarLite::extract_path(StateId from) const {
  if (from >= graph_.num_nodes()) throw UsageError("state not in graph");
  if (g(from).is_infinite() && from != goal_) throw UsageError("path requested from unreachable state");
  std::vector<StateId> path{from};
  StateId s = from;
  const std::size_t limit = graph_.num_nodes() + 1;
  while (s != goal_) {
    StateId next = kNoState;
    Weight best = Weight::infinity();
    graph_.for_each_successor(s, [&](StateId v, Weight w) {
      const Weight cand = g(v) + w;
      if (cand < best || (cand == best && cand.is_finite() && v < next)) {
        best = cand;
        next = v;
      }
    });
    if (next == kNoState || path.size() > limit) {
      throw UsageError("path extraction failed: search not converged");
    }
    path.push_back(next);
    s = next;
  }
  return path;
}

}  // namespace ltldstar
