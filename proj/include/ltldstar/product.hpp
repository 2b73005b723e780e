#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ltldstar/digraph.hpp"
#include "ltldstar/nba.hpp"
#include "ltldstar/wts.hpp"

namespace ltldstar {

enum class ProductMode { kPlain, kRelaxed };

/// A change to one WTS transition, as observed by the robot.
struct WtsChange {
  enum class Kind { kAdd, kDelete, kReweight };
  Kind kind;
  std::size_t from;
  std::size_t to;
  std::int64_t weight = 0;  // ignored for kDelete
};

/// One element of `mod`: the new weight of a product edge. `edge` is kNoEdge
/// for an edge that does not exist yet (a brand-new WTS transition).
struct PaEdgeChange {
  EdgeId edge;
  StateId from;
  StateId to;
  Weight weight;
};

/// Synchronized product of a WTS and an NBA, states indexed pi * |Q| + q.
class ProductAutomaton {
 public:
  const Wts& wts() const { return wts_; }
  const Nba& nba() const { return *nba_; }
  const std::shared_ptr<const Nba>& nba_ptr() const { return nba_; }
  ProductMode mode() const { return mode_; }
  const Digraph& graph() const { return graph_; }
  /// Mutable view for search instances; edge weights must only change via apply().
  Digraph& search_graph() { return graph_; }

  std::size_t num_states() const { return graph_.num_nodes(); }
  StateId state(std::size_t pi, std::size_t q) const {
    return static_cast<StateId>(pi * nba_->num_states() + q);
  }
  std::size_t wts_state(StateId s) const { return s / nba_->num_states(); }
  std::size_t nba_state(StateId s) const { return s % nba_->num_states(); }
  bool is_accepting(StateId s) const { return nba_->is_accepting(nba_state(s)); }

  /// Pi_init x Q0.
  std::vector<StateId> initial_states() const;
  /// {pi} x Q0 for a chosen WTS start state.
  std::vector<StateId> initial_states_at(std::size_t pi) const;
  /// F' = Pi x F in increasing state order; position in this list is k.
  const std::vector<StateId>& accepting_states() const { return accepting_; }

  /// Product edges generated from a WTS transition.
  std::span<const EdgeId> edges_of_wts_edge(std::size_t wts_edge) const;
  /// Static violation component of an edge (kept while the edge is deleted).
  std::int64_t violation(EdgeId e) const { return violation_.at(e); }

  /// Applies a mod set (weights, and insertion of new edges). Returns the
  /// changes with edge ids filled in.
  std::vector<PaEdgeChange> apply(std::span<const PaEdgeChange> mod);

  /// Applies the WTS-level change to the stored WTS copy, then the mapped mod.
  std::vector<PaEdgeChange> apply(const WtsChange& change);

 private:
  friend ProductAutomaton build_product(const Wts&, std::shared_ptr<const Nba>);
  friend ProductAutomaton build_relaxed_product(const Wts&, std::shared_ptr<const Nba>);
  friend std::vector<PaEdgeChange> map_wts_change(const WtsChange&, const ProductAutomaton&);

  ProductAutomaton(const Wts& wts, std::shared_ptr<const Nba> nba, ProductMode mode);
  void add_wts_edge_products(std::size_t wts_edge);
  /// Violation of q_m -> q_n into a state labelled `bits`; -1 when no edge.
  std::int64_t pair_violation(std::size_t pair_index, std::uint64_t bits) const;

  Wts wts_;
  std::shared_ptr<const Nba> nba_;
  ProductMode mode_;
  Digraph graph_;
  std::vector<std::int64_t> violation_;
  std::vector<std::vector<EdgeId>> by_wts_edge_;
  std::vector<StateId> accepting_;
};

ProductAutomaton build_product(const Wts& wts, std::shared_ptr<const Nba> nba);
ProductAutomaton build_relaxed_product(const Wts& wts, std::shared_ptr<const Nba> nba);
ProductAutomaton build(const Wts& wts, std::shared_ptr<const Nba> nba, ProductMode mode);

/// Violation of the transition s_m -> s_n: 0 if L(pi_j) enables q_m -> q_n,
/// else the minimal rho to an enabling label. Throws UsageError when pi_i -> pi_j
/// is not a WTS transition or chi(q_m, q_n) is empty.
int dist(const ProductAutomaton& pa, StateId s_m, StateId s_n);

/// Product edges affected by a WTS change, with their new weights. Deletion is
/// travel = infinity. Does not modify `pa`.
std::vector<PaEdgeChange> map_wts_change(const WtsChange& change, const ProductAutomaton& pa);

}  // namespace ltldstar
