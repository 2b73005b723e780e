#include "ltldstar/planner.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "ltldstar/errors.hpp"

namespace ltldstar {

Weight path_weight(const Digraph& graph, std::span<const StateId> path) {
  Weight total = Weight::zero();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Weight best = Weight::infinity();
    for (auto e : graph.out(path[i])) {
      const auto& edge = graph.edge(e);
      if (edge.to == path[i + 1] && edge.weight < best) best = edge.weight;
    }
    total += best;
  }
  return total;
}

// --- suffix ---------------------------------------------------------------

void SuffixRecord::retrieve() {
  cost_ = search_->g(acc_);
  loop_.clear();
  if (cost_.is_infinite()) return;
  loop_ = search_->extract_path(acc_);
  loop_.back() = acc_;  // project the imaginary goal back onto the accepting state
}

SuffixRecord suffix_initialize(ProductAutomaton& pa, std::size_t k) {
  const auto& accepting = pa.accepting_states();
  if (k >= accepting.size()) throw UsageError("accepting index out of range");
  SuffixRecord rec;
  rec.k_ = k;
  rec.acc_ = accepting[k];
  SearchGraph graph(pa.search_graph());
  rec.img_ = graph.add_virtual_node();
  for (auto e : pa.graph().in(rec.acc_)) {
    const auto& edge = pa.graph().edge(e);
    graph.set_virtual_edge(edge.from, rec.img_, edge.weight);
    rec.live_ = rec.live_ || edge.weight.is_finite();
  }
  rec.search_ = std::make_unique<DStarLite>(std::move(graph), rec.acc_, rec.img_);
  rec.search_->compute_shortest_path();
  rec.retrieve();
  return rec;
}

bool suffix_replan(SuffixRecord& record, std::span<const PaEdgeChange> mod) {
  auto& search = *record.search_;
  for (const auto& c : mod) {
    if (c.to == record.acc_) {
      search.graph().set_virtual_edge(c.from, record.img_, c.weight);
      search.update_vertex(c.from);
      record.live_ = record.live_ || c.weight.is_finite();
    }
    search.notify_edge_changed(c.from, c.to);
  }
  if (mod.empty()) return false;
  const Weight before = record.cost_;
  if (search.queue_size() != 0) search.compute_shortest_path();
  // Re-extract even at equal cost: a reweight can flip a tie along the loop.
  record.retrieve();
  return record.cost_ != before;
}

// --- run --------------------------------------------------------------------

StateId Run::state_at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  const std::size_t period = suffix.size() - 1;
  return suffix[(i - (prefix.size() - 1)) % period];
}

Weight total_cost(const Run& run, std::int64_t beta) {
  return run.prefix_cost + run.suffix_cost.scaled(beta);
}

// --- planner ----------------------------------------------------------------

Planner::Planner(ProductAutomaton pa, PlannerOptions options)
    : pa_(std::move(pa)), options_(std::move(options)) {
  if (options_.beta < 1) throw UsageError("beta must be >= 1");
  const auto& accepting = pa_.accepting_states();
  for (std::size_t k = 0; k < accepting.size(); ++k) k_of_.emplace(accepting[k], k);
}

std::int64_t Planner::heuristic(StateId a, StateId b) const {
  if (!options_.wts_heuristic) return 0;
  if (a >= pa_.num_states() || b >= pa_.num_states()) return 0;  // virtual nodes
  return options_.wts_heuristic(pa_.wts_state(a), pa_.wts_state(b));
}

void Planner::wire_suffix_costs() {
  auto& graph = main_->graph();
  for (const auto& rec : suffixes_) {
    const Weight w = rec.cost().scaled(options_.beta);
    const auto existing = graph.virtual_edge(rec.accepting_state(), img_);
    if (existing || w.is_finite()) graph.set_virtual_edge(rec.accepting_state(), img_, w);
  }
}

Run Planner::plan_initial(std::span<const StateId> starts) {
  if (starts.empty()) throw UsageError("no start state");
  suffixes_.clear();
  suffixes_.reserve(pa_.accepting_states().size());
  for (std::size_t k = 0; k < pa_.accepting_states().size(); ++k) {
    suffixes_.push_back(suffix_initialize(pa_, k));
  }

  SearchGraph graph(pa_.search_graph());
  img_ = graph.add_virtual_node();
  StateId start = starts.front();
  synthetic_start_ = kNoState;
  if (starts.size() > 1) {
    synthetic_start_ = graph.add_virtual_node();
    for (auto s : starts) graph.set_virtual_edge(synthetic_start_, s, Weight::zero());
    start = synthetic_start_;
  }
  main_ = std::make_unique<DStarLite>(std::move(graph), start, img_,
                                      [this](StateId a, StateId b) { return heuristic(a, b); });
  wire_suffix_costs();

  last_stats_ = {};
  for (const auto& rec : suffixes_) last_stats_.suffix_expansions += rec.instance().stats().expansions;
  last_stats_.main_expansions = main_->compute_shortest_path();
  last_stats_.expansions = last_stats_.suffix_expansions + last_stats_.main_expansions;

  has_run_ = false;
  cursor_ = 0;
  run_ = extract_run();
  has_run_ = true;
  return run_;
}

Run Planner::extract_run() {
  const StateId start = main_->start();
  if (main_->g(start).is_infinite()) throw NoAcceptingRun();
  auto path = main_->extract_path(start);
  path.pop_back();  // imaginary goal
  if (!path.empty() && path.front() == synthetic_start_) path.erase(path.begin());
  Run run;
  run.prefix = std::move(path);
  const auto k = k_of_.at(run.prefix.back());
  const auto& rec = suffixes_[k];
  run.suffix = rec.loop();
  run.accepting_index = k;
  run.prefix_cost = path_weight(pa_.graph(), run.prefix);
  run.suffix_cost = rec.cost();
  run.total = total_cost(run, options_.beta);
  return run;
}

StateId Planner::current_state() const {
  if (!has_run_) throw UsageError("no active run");
  return run_.state_at(cursor_);
}

Phase Planner::phase() const {
  if (!has_run_) return Phase::kPrefix;
  return run_.in_suffix(cursor_) ? Phase::kSuffix : Phase::kPrefix;
}

Run Planner::replan(std::span<const WtsChange> changes, StateId new_start) {
  std::vector<PaEdgeChange> mod;
  for (const auto& c : changes) {
    if (c.kind == WtsChange::Kind::kAdd && !pa_.wts().find_edge(c.from, c.to)) {
      auto applied = pa_.apply(c);
      mod.insert(mod.end(), applied.begin(), applied.end());
      continue;
    }
    auto m = map_wts_change(c, pa_);
    mod.insert(mod.end(), m.begin(), m.end());
  }
  return replan(mod, new_start);
}

Run Planner::replan(std::span<const PaEdgeChange> mod, StateId new_start) {
  if (!main_) throw UsageError("replan before plan_initial");
  if (new_start >= pa_.num_states()) throw UsageError("start not a product state");

  // Phase from the robot's position on the active run.
  Phase phase = Phase::kPrefix;
  if (has_run_) {
    if (new_start == current_state()) {
      phase = this->phase();
    } else if (std::find(run_.suffix.begin(), run_.suffix.end(), new_start) != run_.suffix.end()) {
      phase = Phase::kSuffix;
    }
  }

  std::vector<PaEdgeChange> applied;
  applied.reserve(mod.size());
  for (const auto& c : mod) {
    // Edges inserted by Planner::replan(WtsChange) are already in the graph.
    if (c.edge != kNoEdge && c.edge < pa_.graph().num_edges() &&
        pa_.graph().edge(c.edge).weight == c.weight) {
      applied.push_back(c);
    } else {
      auto a = pa_.apply(std::span<const PaEdgeChange>(&c, 1));
      applied.push_back(a.front());
    }
  }

  last_stats_ = {};
  last_stats_.phase = phase;

  std::vector<char> changed(suffixes_.size(), 0);
  std::vector<std::size_t> before(suffixes_.size());
  for (std::size_t k = 0; k < suffixes_.size(); ++k) {
    before[k] = suffixes_[k].instance().stats().expansions;
  }
  std::unordered_set<StateId> into_accepting;
  for (const auto& c : applied) {
    if (pa_.is_accepting(c.to)) into_accepting.insert(c.to);
  }
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      auto& rec = suffixes_[k];
      if (!rec.live() && !into_accepting.count(rec.accepting_state())) continue;
      changed[k] = suffix_replan(rec, applied) ? 1 : 0;
    }
  };
  const unsigned threads = std::max(1U, options_.threads);
  if (threads == 1 || suffixes_.size() < 2 * threads) {
    work(0, suffixes_.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (suffixes_.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk, hi = std::min(suffixes_.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
  }  // join barrier
  for (std::size_t k = 0; k < suffixes_.size(); ++k) {
    last_stats_.suffix_expansions += suffixes_[k].instance().stats().expansions - before[k];
    last_stats_.suffix_costs_changed += changed[k];
  }

  auto& graph = main_->graph();
  if (phase == Phase::kSuffix) {
    for (std::size_t k = 0; k < suffixes_.size(); ++k) {
      if (changed[k]) {
        graph.set_virtual_edge(suffixes_[k].accepting_state(), img_,
                               suffixes_[k].cost().scaled(options_.beta));
      }
    }
    // Fresh search rooted at the robot's position; all weights are current.
    main_ = std::make_unique<DStarLite>(std::move(main_->graph()), new_start, img_,
                                        [this](StateId a, StateId b) { return heuristic(a, b); });
  } else {
    main_->move_start(new_start);
    for (std::size_t k = 0; k < suffixes_.size(); ++k) {
      if (!changed[k]) continue;
      const StateId acc = suffixes_[k].accepting_state();
      graph.set_virtual_edge(acc, img_, suffixes_[k].cost().scaled(options_.beta));
      main_->update_vertex(acc);
    }
    for (const auto& c : applied) main_->notify_edge_changed(c.from, c.to);
  }
  last_stats_.main_expansions = main_->compute_shortest_path();
  last_stats_.expansions = last_stats_.suffix_expansions + last_stats_.main_expansions;

  has_run_ = false;
  cursor_ = 0;
  run_ = extract_run();
  has_run_ = true;
  return run_;
}

}  // namespace ltldstar
