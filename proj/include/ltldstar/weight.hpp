#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace ltldstar {

/// Edge / path cost as a (violation, travel) pair.
///
/// Ordering is lexicographic: any difference in accumulated specification
/// violation outranks any difference in travel time. Infinity is a single
/// distinguished value (both components saturated) that absorbs under
/// addition and compares greater than every finite weight.
class Weight {
 public:
  using value_type = std::int64_t;
  static constexpr value_type kInf = std::numeric_limits<value_type>::max();

  constexpr Weight() = default;
  constexpr Weight(value_type violation, value_type travel)
      : violation_(violation), travel_(travel) {
    if (violation_ == kInf || travel_ == kInf) {
      violation_ = kInf;
      travel_ = kInf;
    }
  }

  static constexpr Weight zero() { return {0, 0}; }
  static constexpr Weight infinity() { return {kInf, kInf}; }
  static constexpr Weight travel_only(value_type travel) { return {0, travel}; }

  constexpr value_type violation() const { return violation_; }
  constexpr value_type travel() const { return travel_; }
  constexpr bool is_infinite() const { return travel_ == kInf; }
  constexpr bool is_finite() const { return travel_ != kInf; }

  constexpr Weight operator+(const Weight& o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    return {violation_ + o.violation_, travel_ + o.travel_};
  }
  constexpr Weight& operator+=(const Weight& o) { return *this = *this + o; }

  /// Componentwise scaling (beta applied to a suffix cost).
  constexpr Weight scaled(value_type factor) const {
    if (is_infinite()) return infinity();
    return {violation_ * factor, travel_ * factor};
  }

  /// Adds heuristic / k_m travel units; violation untouched.
  constexpr Weight plus_travel(value_type units) const {
    if (is_infinite()) return infinity();
    return {violation_, travel_ + units};
  }

  constexpr auto operator<=>(const Weight&) const = default;
  constexpr bool operator==(const Weight&) const = default;

 private:
  value_type violation_ = 0;
  value_type travel_ = 0;
};

constexpr Weight min(const Weight& a, const Weight& b) { return b < a ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Weight& w) {
  if (w.is_infinite()) return os << "(inf)";
  return os << '(' << w.violation() << ',' << w.travel() << ')';
}

}  // namespace ltldstar
