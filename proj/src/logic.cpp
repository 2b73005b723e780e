#include "ltldstar/logic.hpp"

#include <bit>
#include <unordered_set>

#include "ltldstar/errors.hpp"

namespace ltldstar {

APUniverse::APUniverse(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxSize) {
    throw UsageError("proposition universe larger than 64");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw UsageError("empty proposition name");
    if (!seen.insert(n).second) throw UsageError("duplicate proposition '" + n + "'");
  }
}

const std::string& APUniverse::name(std::size_t index) const {
  if (index >= names_.size()) throw UsageError("proposition index out of universe");
  return names_[index];
}

std::optional<std::size_t> APUniverse::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::uint64_t universe_mask(std::size_t size) {
  return size >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << size) - 1);
}

Label::Label(SharedUniverse universe, std::uint64_t bits)
    : universe_(std::move(universe)), bits_(bits) {
  if (!universe_) throw UsageError("label without universe");
  if (bits_ & ~universe_mask(universe_->size())) {
    throw UsageError("label sets a bit outside its universe");
  }
}

Label Label::full(SharedUniverse universe) {
  const auto mask = universe_mask(universe->size());
  return {std::move(universe), mask};
}

Label Label::of(SharedUniverse universe, const std::vector<std::string>& names) {
  std::uint64_t bits = 0;
  for (const auto& n : names) {
    auto idx = universe->index_of(n);
    if (!idx) throw UsageError("unknown proposition '" + n + "'");
    bits |= std::uint64_t{1} << *idx;
  }
  return {std::move(universe), bits};
}

bool Label::contains(std::size_t index) const {
  if (!universe_ || index >= universe_->size()) {
    throw UsageError("proposition index out of universe");
  }
  return (bits_ >> index) & 1U;
}

std::size_t Label::count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool Label::operator==(const Label& o) const {
  if (bits_ != o.bits_) return false;
  if (universe_ == o.universe_) return true;
  return universe_ && o.universe_ && *universe_ == *o.universe_;
}

int xi(std::size_t ap, const Label& label) { return label.contains(ap) ? 1 : 0; }

std::vector<int> zeta(const Label& label) {
  const std::size_t r = label.universe() ? label.universe()->size() : 0;
  std::vector<int> out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = xi(i, label);
  return out;
}

int rho(const Label& a, const Label& b) {
  if (!a.universe() || !b.universe() ||
      (a.universe() != b.universe() && !(*a.universe() == *b.universe()))) {
    throw UsageError("rho over labels of different universes");
  }
  return rho_bits(a.bits(), b.bits());
}

}  // namespace ltldstar
