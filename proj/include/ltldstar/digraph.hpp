#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ltldstar/weight.hpp"

namespace ltldstar {

using StateId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr StateId kNoState = static_cast<StateId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct Edge {
  StateId from;
  StateId to;
  Weight weight;
};

/// Directed multigraph with Weight-valued edges and materialized successor and
/// predecessor lists. Edges are never removed; deletion is weight = infinity.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t num_nodes) : out_(num_nodes), in_(num_nodes) {}

  std::size_t num_nodes() const { return out_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  EdgeId add_edge(StateId from, StateId to, Weight w);
  void set_weight(EdgeId e, Weight w) { edges_.at(e).weight = w; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeId> out(StateId s) const { return out_[s]; }
  std::span<const EdgeId> in(StateId s) const { return in_[s]; }

  /// First edge from -> to, if any.
  std::optional<EdgeId> find_edge(StateId from, StateId to) const;

  /// Number of edges whose weight is finite.
  std::size_t num_finite_edges() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

}  // namespace ltldstar
