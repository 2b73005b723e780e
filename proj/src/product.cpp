#include "ltldstar/product.hpp"

#include <unordered_map>

#include "ltldstar/errors.hpp"

namespace ltldstar {

namespace {

void check_universe(const Wts& wts, const Nba& nba) {
  if (!(*wts.ap() == *nba.ap())) {
    throw UsageError("WTS and NBA proposition universes differ");
  }
}

}  // namespace

ProductAutomaton::ProductAutomaton(const Wts& wts, std::shared_ptr<const Nba> nba, ProductMode mode)
    : wts_(wts), nba_(std::move(nba)), mode_(mode) {
  if (!nba_) throw UsageError("null NBA");
  check_universe(wts_, *nba_);
  const std::size_t n = wts_.num_states() * nba_->num_states();
  if (n >= kNoState) throw UsageError("product too large");
  graph_ = Digraph(n);
  for (std::size_t pi = 0; pi < wts_.num_states(); ++pi) {
    for (std::size_t q = 0; q < nba_->num_states(); ++q) {
      if (nba_->is_accepting(q)) accepting_.push_back(state(pi, q));
    }
  }

  // Violation of every NBA pair for every distinct label present in the WTS.
  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> table;
  for (std::size_t pi = 0; pi < wts_.num_states(); ++pi) {
    const auto bits = wts_.label_bits(pi);
    if (table.contains(bits)) continue;
    std::vector<std::int64_t> row(nba_->pairs().size(), -1);
    for (std::size_t p = 0; p < row.size(); ++p) row[p] = pair_violation(p, bits);
    table.emplace(bits, std::move(row));
  }

  by_wts_edge_.resize(wts_.num_edges());
  for (std::size_t e = 0; e < wts_.num_edges(); ++e) {
    const auto& we = wts_.edge(e);
    const auto& row = table.at(wts_.label_bits(we.to));
    const auto travel = we.weight;
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] < 0) continue;
      const auto [q_m, q_n] = nba_->pairs()[p];
      const Weight w = travel == Weight::kInf ? Weight::infinity() : Weight(row[p], travel);
      by_wts_edge_[e].push_back(graph_.add_edge(state(we.from, q_m), state(we.to, q_n), w));
      violation_.push_back(row[p]);
    }
  }
}

std::int64_t ProductAutomaton::pair_violation(std::size_t pair_index, std::uint64_t bits) const {
  const auto [q_m, q_n] = nba_->pairs()[pair_index];
  if (mode_ == ProductMode::kPlain) return nba_->enabled(q_m, q_n, bits) ? 0 : -1;
  const auto v = min_violation(*nba_, q_m, q_n, bits);
  return v ? *v : -1;
}

void ProductAutomaton::add_wts_edge_products(std::size_t wts_edge) {
  if (by_wts_edge_.size() <= wts_edge) by_wts_edge_.resize(wts_edge + 1);
  const auto& we = wts_.edge(wts_edge);
  const auto bits = wts_.label_bits(we.to);
  for (std::size_t p = 0; p < nba_->pairs().size(); ++p) {
    const auto v = pair_violation(p, bits);
    if (v < 0) continue;
    const auto [q_m, q_n] = nba_->pairs()[p];
    by_wts_edge_[wts_edge].push_back(
        graph_.add_edge(state(we.from, q_m), state(we.to, q_n), Weight(v, we.weight)));
    violation_.push_back(v);
  }
}

std::vector<StateId> ProductAutomaton::initial_states() const {
  std::vector<StateId> out;
  for (auto pi : wts_.initial()) {
    for (auto q : nba_->initial()) out.push_back(state(pi, q));
  }
  return out;
}

std::vector<StateId> ProductAutomaton::initial_states_at(std::size_t pi) const {
  if (pi >= wts_.num_states()) throw UsageError("WTS state out of range");
  std::vector<StateId> out;
  for (auto q : nba_->initial()) out.push_back(state(pi, q));
  return out;
}

std::span<const EdgeId> ProductAutomaton::edges_of_wts_edge(std::size_t wts_edge) const {
  if (wts_edge >= by_wts_edge_.size()) return {};
  return by_wts_edge_[wts_edge];
}

std::vector<PaEdgeChange> ProductAutomaton::apply(std::span<const PaEdgeChange> mod) {
  std::vector<PaEdgeChange> applied;
  applied.reserve(mod.size());
  for (const auto& c : mod) {
    const auto pi_i = wts_state(c.from), pi_j = wts_state(c.to);
    auto we = wts_.find_edge(pi_i, pi_j);
    if (c.edge == kNoEdge) {
      if (c.weight.is_infinite()) throw UsageError("cannot insert a deleted edge");
      if (!we) we = wts_.add_edge(pi_i, pi_j, c.weight.travel());
      if (by_wts_edge_.size() <= *we) by_wts_edge_.resize(*we + 1);
      const auto id = graph_.add_edge(c.from, c.to, c.weight);
      by_wts_edge_[*we].push_back(id);
      violation_.push_back(c.weight.violation());
      applied.push_back({id, c.from, c.to, c.weight});
      continue;
    }
    if (c.edge >= graph_.num_edges()) throw UnknownEdge("unknown product edge");
    const auto& e = graph_.edge(c.edge);
    if (e.from != c.from || e.to != c.to) throw UnknownEdge("product edge endpoints mismatch");
    graph_.set_weight(c.edge, c.weight);
    if (we) wts_.set_weight(*we, c.weight.is_infinite() ? Weight::kInf : c.weight.travel());
    applied.push_back(c);
  }
  return applied;
}

std::vector<PaEdgeChange> ProductAutomaton::apply(const WtsChange& change) {
  if (change.kind == WtsChange::Kind::kAdd && !wts_.find_edge(change.from, change.to)) {
    const auto e = wts_.add_edge(change.from, change.to, change.weight);
    const auto before = graph_.num_edges();
    add_wts_edge_products(e);
    std::vector<PaEdgeChange> applied;
    for (auto id = static_cast<EdgeId>(before); id < graph_.num_edges(); ++id) {
      const auto& pe = graph_.edge(id);
      applied.push_back({id, pe.from, pe.to, pe.weight});
    }
    return applied;
  }
  const auto mod = map_wts_change(change, *this);
  auto applied = apply(std::span<const PaEdgeChange>(mod));
  // WTS weight is tracked even when no product edge mirrors the transition.
  const auto we = *wts_.find_edge(change.from, change.to);
  wts_.set_weight(we, change.kind == WtsChange::Kind::kDelete ? Weight::kInf : change.weight);
  return applied;
}

ProductAutomaton build_product(const Wts& wts, std::shared_ptr<const Nba> nba) {
  return ProductAutomaton(wts, std::move(nba), ProductMode::kPlain);
}

ProductAutomaton build_relaxed_product(const Wts& wts, std::shared_ptr<const Nba> nba) {
  return ProductAutomaton(wts, std::move(nba), ProductMode::kRelaxed);
}

ProductAutomaton build(const Wts& wts, std::shared_ptr<const Nba> nba, ProductMode mode) {
  return mode == ProductMode::kPlain ? build_product(wts, std::move(nba))
                                     : build_relaxed_product(wts, std::move(nba));
}

int dist(const ProductAutomaton& pa, StateId s_m, StateId s_n) {
  if (s_m >= pa.num_states() || s_n >= pa.num_states()) throw UsageError("state out of range");
  const auto pi_i = pa.wts_state(s_m), pi_j = pa.wts_state(s_n);
  if (!pa.wts().find_edge(pi_i, pi_j)) throw UsageError("not a WTS transition");
  const auto v = min_violation(pa.nba(), pa.nba_state(s_m), pa.nba_state(s_n),
                               pa.wts().label_bits(pi_j));
  if (!v) throw UsageError("chi(q_m, q_n) is empty; no relaxed transition");
  return *v;
}

std::vector<PaEdgeChange> map_wts_change(const WtsChange& change, const ProductAutomaton& pa) {
  const auto& wts = pa.wts();
  if (change.from >= wts.num_states() || change.to >= wts.num_states()) {
    throw UsageError("WTS change references an unknown state");
  }
  const auto we = wts.find_edge(change.from, change.to);
  if (change.kind != WtsChange::Kind::kDelete && change.weight < 1) {
    throw UsageError("WTS edge weights must be positive");
  }
  std::vector<PaEdgeChange> mod;
  if (!we) {
    if (change.kind != WtsChange::Kind::kAdd) throw UnknownEdge("unknown WTS edge");
    const auto bits = wts.label_bits(change.to);
    for (std::size_t p = 0; p < pa.nba().pairs().size(); ++p) {
      const auto v = pa.pair_violation(p, bits);
      if (v < 0) continue;
      const auto [q_m, q_n] = pa.nba().pairs()[p];
      mod.push_back({kNoEdge, pa.state(change.from, q_m), pa.state(change.to, q_n),
                     Weight(v, change.weight)});
    }
    return mod;
  }
  for (auto id : pa.edges_of_wts_edge(*we)) {
    const auto& e = pa.graph().edge(id);
    const Weight w = change.kind == WtsChange::Kind::kDelete
                         ? Weight::infinity()
                         : Weight(pa.violation(id), change.weight);
    mod.push_back({id, e.from, e.to, w});
  }
  return mod;
}

}  // namespace ltldstar
