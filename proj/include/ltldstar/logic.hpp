#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ltldstar {

/// Ordered set of atomic propositions. Index order is declaration order.
class APUniverse {
 public:
  static constexpr std::size_t kMaxSize = 64;

  APUniverse() = default;
  explicit APUniverse(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const APUniverse& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
};

using SharedUniverse = std::shared_ptr<const APUniverse>;

/// A subset of a universe's propositions, stored as a bit pattern.
class Label {
 public:
  Label() = default;
  Label(SharedUniverse universe, std::uint64_t bits);

  static Label empty(SharedUniverse universe) { return {std::move(universe), 0}; }
  static Label full(SharedUniverse universe);
  static Label of(SharedUniverse universe, const std::vector<std::string>& names);

  std::uint64_t bits() const { return bits_; }
  const SharedUniverse& universe() const { return universe_; }
  bool contains(std::size_t index) const;
  std::size_t count() const;

  bool operator==(const Label& o) const;

 private:
  SharedUniverse universe_;
  std::uint64_t bits_ = 0;
};

std::uint64_t universe_mask(std::size_t size);

/// 1 iff proposition `ap` is in `label`.
int xi(std::size_t ap, const Label& label);

/// Membership vector of `label` over its universe, in declaration order.
std::vector<int> zeta(const Label& label);

/// Number of propositions on which the two labels disagree.
int rho(const Label& a, const Label& b);

/// rho on raw bit patterns; callers guarantee a shared universe.
inline int rho_bits(std::uint64_t a, std::uint64_t b) {
  return __builtin_popcountll(a ^ b);
}

}  // namespace ltldstar
