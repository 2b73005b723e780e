#include "ltldstar/guard.hpp"

#include <bit>

namespace ltldstar {

Guard Guard::truth() { return Guard(std::make_shared<Node>(Node{Kind::kTrue, 0, nullptr, nullptr})); }
Guard Guard::falsity() { return Guard(std::make_shared<Node>(Node{Kind::kFalse, 0, nullptr, nullptr})); }

Guard Guard::prop(std::size_t index) {
  return Guard(std::make_shared<Node>(Node{Kind::kProp, index, nullptr, nullptr}));
}

Guard Guard::negate(Guard g) {
  return Guard(std::make_shared<Node>(Node{Kind::kNot, 0, std::move(g.node_), nullptr}));
}

Guard Guard::conj(Guard a, Guard b) {
  return Guard(std::make_shared<Node>(Node{Kind::kAnd, 0, std::move(a.node_), std::move(b.node_)}));
}

Guard Guard::disj(Guard a, Guard b) {
  return Guard(std::make_shared<Node>(Node{Kind::kOr, 0, std::move(a.node_), std::move(b.node_)}));
}

bool Guard::eval(const Node& n, std::uint64_t bits) {
  switch (n.kind) {
    case Kind::kTrue:
      return true;
    case Kind::kFalse:
      return false;
    case Kind::kProp:
      return (bits >> n.prop) & 1U;
    case Kind::kNot:
      return !eval(*n.lhs, bits);
    case Kind::kAnd:
      return eval(*n.lhs, bits) && eval(*n.rhs, bits);
    case Kind::kOr:
      return eval(*n.lhs, bits) || eval(*n.rhs, bits);
  }
  return false;
}

std::uint64_t Guard::support(const Node& n) {
  switch (n.kind) {
    case Kind::kTrue:
    case Kind::kFalse:
      return 0;
    case Kind::kProp:
      return std::uint64_t{1} << n.prop;
    case Kind::kNot:
      return support(*n.lhs);
    case Kind::kAnd:
    case Kind::kOr:
      return support(*n.lhs) | support(*n.rhs);
  }
  return 0;
}

std::size_t Guard::arity() const {
  const auto s = support();
  return s == 0 ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(s));
}

void Guard::print(const Node& n, std::string& out, int context) {
  switch (n.kind) {
    case Kind::kTrue:
      out += 't';
      return;
    case Kind::kFalse:
      out += 'f';
      return;
    case Kind::kProp:
      out += std::to_string(n.prop);
      return;
    case Kind::kNot:
      out += '!';
      print(*n.lhs, out, 3);
      return;
    case Kind::kAnd:
    case Kind::kOr: {
      // Binding strength: | is 1, & is 2, ! is 3.
      const int own = n.kind == Kind::kAnd ? 2 : 1;
      if (own < context) out += '(';
      print(*n.lhs, out, own);
      out += n.kind == Kind::kAnd ? " & " : " | ";
      print(*n.rhs, out, own);
      if (own < context) out += ')';
      return;
    }
  }
}

std::string Guard::to_string() const {
  std::string out;
  print(*node_, out, 0);
  return out;
}

}  // namespace ltldstar
