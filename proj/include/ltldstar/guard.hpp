#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

namespace ltldstar {

/// Boolean formula over proposition indices, used as an NBA transition label.
class Guard {
 public:
  enum class Kind { kTrue, kFalse, kProp, kNot, kAnd, kOr };

  static Guard truth();
  static Guard falsity();
  static Guard prop(std::size_t index);
  static Guard negate(Guard g);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);

  Kind kind() const { return node_->kind; }

  /// Truth value under the assignment encoded by `label_bits`.
  bool eval(std::uint64_t label_bits) const { return eval(*node_, label_bits); }

  /// Bit mask of propositions referenced anywhere in the formula.
  std::uint64_t support() const { return support(*node_); }

  /// Highest referenced proposition index plus one (0 if none).
  std::size_t arity() const;

  /// HOA guard syntax with only the parentheses precedence requires.
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::size_t prop = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Guard(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static bool eval(const Node& n, std::uint64_t bits);
  static std::uint64_t support(const Node& n);
  static void print(const Node& n, std::string& out, int context);

  std::shared_ptr<const Node> node_;
};

}  // namespace ltldstar
