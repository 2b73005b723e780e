#include "ltldstar/digraph.hpp"

#include <algorithm>

#include "ltldstar/errors.hpp"

namespace ltldstar {

EdgeId Digraph::add_edge(StateId from, StateId to, Weight w) {
  if (from >= num_nodes() || to >= num_nodes()) throw UsageError("edge endpoint out of range");
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back({from, to, w});
  out_[from].push_back(id);
  in_[to].push_back(id);
  return id;
}

std::optional<EdgeId> Digraph::find_edge(StateId from, StateId to) const {
  if (from >= num_nodes()) return std::nullopt;
  for (auto e : out_[from]) {
    if (edges_[e].to == to) return e;
  }
  return std::nullopt;
}

std::size_t Digraph::num_finite_edges() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight.is_finite(); }));
}

}  // namespace ltldstar
