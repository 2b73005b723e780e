#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltldstar/guard.hpp"
#include "ltldstar/logic.hpp"

namespace ltldstar {

struct NbaTransition {
  std::size_t from;
  Guard guard;
  std::size_t to;
};

/// Non-deterministic Buchi automaton with state-based acceptance.
class Nba {
 public:
  Nba(SharedUniverse ap, std::size_t num_states, std::vector<std::size_t> initial,
      std::vector<bool> accepting, std::vector<NbaTransition> transitions);

  const SharedUniverse& ap() const { return ap_; }
  std::size_t num_states() const { return num_states_; }
  const std::vector<std::size_t>& initial() const { return initial_; }
  bool is_accepting(std::size_t q) const { return accepting_.at(q); }
  std::size_t num_accepting() const;
  const std::vector<NbaTransition>& transitions() const { return transitions_; }

  /// Distinct (q_m, q_n) pairs joined by at least one transition, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }

  /// Transitions from q_m to q_n (indices into transitions()).
  const std::vector<std::size_t>& transitions_between(std::size_t q_m, std::size_t q_n) const;

  /// q_n in delta(q_m, label).
  bool enabled(std::size_t q_m, std::size_t q_n, std::uint64_t label_bits) const;

  /// Union of guard supports on q_m -> q_n.
  std::uint64_t pair_support(std::size_t q_m, std::size_t q_n) const;

 private:
  SharedUniverse ap_;
  std::size_t num_states_;
  std::vector<std::size_t> initial_;
  std::vector<bool> accepting_;
  std::vector<NbaTransition> transitions_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::size_t>> pair_transitions_;  // parallel to pairs_
};

/// Parses the supported HOA v1 subset (state-based Buchi acceptance, explicit
/// transition labels). Throws ParseError / UnsupportedFeature.
Nba parse_nba(std::string_view text);

/// Serializes back to HOA v1.
std::string to_hoa(const Nba& nba, std::string_view name = {});

/// Automaton for visiting regions r0, r1, ..., r_{m-1} in this order,
/// forever, where no other listed region may be visited while waiting for the
/// next one. A waiting state may see its own target again without taking it,
/// except r0, which always starts a new round. The universe is `regions` in
/// the given order (m >= 2). States: 0 initial (before the first r0), 1
/// accepting (just visited r0), and i + 1 waiting for r_{i mod m}; state 2 is
/// the non-accepting wait for r1.
Nba sequencing_nba(const std::vector<std::string>& regions);

/// All labels enabling q_m -> q_n, in increasing bit order. Requires |AP| <= 20.
std::vector<Label> chi(const Nba& nba, std::size_t q_m, std::size_t q_n);

/// Minimal rho from `label_bits` to an element of chi(q_m, q_n); 0 when the
/// label itself enables the transition; nullopt when chi is empty.
std::optional<int> min_violation(const Nba& nba, std::size_t q_m, std::size_t q_n,
                                 std::uint64_t label_bits);

}  // namespace ltldstar
