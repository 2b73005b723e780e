#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltldstar/logic.hpp"

namespace ltldstar {

struct WtsEdge {
  std::size_t from;
  std::size_t to;
  std::int64_t weight;  // Weight::kInf once deleted
};

/// Weighted transition system: the robot's workspace abstraction.
class Wts {
 public:
  Wts(SharedUniverse ap, std::vector<std::uint64_t> labels, std::vector<std::size_t> initial,
      std::vector<std::string> names = {});

  const SharedUniverse& ap() const { return ap_; }
  std::size_t num_states() const { return labels_.size(); }
  std::uint64_t label_bits(std::size_t pi) const { return labels_.at(pi); }
  Label label(std::size_t pi) const { return {ap_, labels_.at(pi)}; }
  const std::vector<std::size_t>& initial() const { return initial_; }
  const std::string& name(std::size_t pi) const { return names_.at(pi); }
  std::optional<std::size_t> state_named(std::string_view name) const;

  const std::vector<WtsEdge>& edges() const { return edges_; }
  const WtsEdge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_live_edges() const;

  /// Adds a new transition; weight must be >= 1.
  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t weight);
  std::optional<std::size_t> find_edge(std::size_t from, std::size_t to) const;
  void set_weight(std::size_t e, std::int64_t weight);

 private:
  static std::uint64_t key(std::size_t from, std::size_t to) {
    return (static_cast<std::uint64_t>(from) << 32) | static_cast<std::uint64_t>(to);
  }

  SharedUniverse ap_;
  std::vector<std::uint64_t> labels_;
  std::vector<std::size_t> initial_;
  std::vector<std::string> names_;
  std::vector<WtsEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Waypoint-graph JSON:
///   {"states":[{"id":..,"label":["A",..]}], "init":[id], "edges":[{"from":..,"to":..,"weight":..}]}
/// Ids may be strings or integers. Label names must belong to `ap`.
Wts load_wts_json(std::string_view text, SharedUniverse ap);

}  // namespace ltldstar
