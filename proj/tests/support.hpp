#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ltldstar/digraph.hpp"
#include "ltldstar/guard.hpp"
#include "ltldstar/nba.hpp"
#include "ltldstar/weight.hpp"

#ifndef LTLDSTAR_SOURCE_DIR
#define LTLDSTAR_SOURCE_DIR "."
#endif

namespace testing {

using namespace ltldstar;

inline std::string read_text(const std::string& relative) {
  std::ifstream in(std::string(LTLDSTAR_SOURCE_DIR) + "/" + relative, std::ios::binary);
  if (!in) throw std::runtime_error("missing test asset " + relative);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Ultimately periodic word u v^omega over bit-pattern letters.
struct Lasso {
  std::vector<std::uint64_t> stem;
  std::vector<std::uint64_t> loop;  // non-empty

  std::size_t size() const { return stem.size() + loop.size(); }
  std::uint64_t at(std::size_t i) const { return i < stem.size() ? stem[i] : loop[i - stem.size()]; }
  std::size_t next(std::size_t i) const { return i + 1 < size() ? i + 1 : stem.size(); }
};

inline Lasso random_lasso(std::mt19937_64& rng, const std::vector<std::uint64_t>& alphabet,
                          std::size_t max_stem, std::size_t max_loop) {
  Lasso w;
  const std::size_t s = rng() % (max_stem + 1), l = 1 + rng() % max_loop;
  for (std::size_t i = 0; i < s; ++i) w.stem.push_back(alphabet[rng() % alphabet.size()]);
  for (std::size_t i = 0; i < l; ++i) w.loop.push_back(alphabet[rng() % alphabet.size()]);
  return w;
}

// LTL over proposition bits, evaluated on every position of a lasso.
struct Ltl {
  enum class Op { kProp, kTrue, kNot, kAnd, kOr, kNext, kUntil, kAlways, kEventually };
  Op op = Op::kTrue;
  std::uint64_t bit = 0;
  std::shared_ptr<const Ltl> a, b;

  using P = std::shared_ptr<const Ltl>;
  static P mk(Op op, P a = nullptr, P b = nullptr, std::uint64_t bit = 0) {
    auto f = std::make_shared<Ltl>();
    f->op = op;
    f->a = std::move(a);
    f->b = std::move(b);
    f->bit = bit;
    return f;
  }
  static P prop(std::uint64_t bit) { return mk(Op::kProp, nullptr, nullptr, bit); }
  static P neg(P a) { return mk(Op::kNot, std::move(a)); }
  static P conj(P a, P b) { return mk(Op::kAnd, std::move(a), std::move(b)); }
  static P disj(P a, P b) { return mk(Op::kOr, std::move(a), std::move(b)); }
  static P implies(P a, P b) { return disj(neg(std::move(a)), std::move(b)); }
  static P next(P a) { return mk(Op::kNext, std::move(a)); }
  static P until(P a, P b) { return mk(Op::kUntil, std::move(a), std::move(b)); }
  static P always(P a) { return mk(Op::kAlways, std::move(a)); }
  static P eventually(P a) { return mk(Op::kEventually, std::move(a)); }
};

inline std::vector<bool> evaluate(const Ltl& f, const Lasso& w) {
  const std::size_t n = w.size();
  std::vector<bool> out(n);
  using Op = Ltl::Op;
  switch (f.op) {
    case Op::kTrue:
      out.assign(n, true);
      return out;
    case Op::kProp:
      for (std::size_t i = 0; i < n; ++i) out[i] = (w.at(i) & f.bit) != 0;
      return out;
    case Op::kNot: {
      auto x = evaluate(*f.a, w);
      for (std::size_t i = 0; i < n; ++i) out[i] = !x[i];
      return out;
    }
    case Op::kAnd:
    case Op::kOr: {
      auto x = evaluate(*f.a, w), y = evaluate(*f.b, w);
      for (std::size_t i = 0; i < n; ++i) out[i] = f.op == Op::kAnd ? (x[i] && y[i]) : (x[i] || y[i]);
      return out;
    }
    case Op::kNext: {
      auto x = evaluate(*f.a, w);
      for (std::size_t i = 0; i < n; ++i) out[i] = x[w.next(i)];
      return out;
    }
    case Op::kUntil:
    case Op::kEventually:
    case Op::kAlways: {
      // Least fixpoint for until/eventually, greatest for always; n+1 sweeps
      // suffice on a lasso of n positions.
      std::vector<bool> x = f.op == Op::kUntil ? evaluate(*f.a, w) : std::vector<bool>(n, true);
      std::vector<bool> y = f.op == Op::kUntil ? evaluate(*f.b, w) : evaluate(*f.a, w);
      const bool greatest = f.op == Op::kAlways;
      out.assign(n, greatest);
      for (std::size_t sweep = 0; sweep <= n; ++sweep) {
        for (std::size_t k = n; k-- > 0;) {
          out[k] = greatest ? (y[k] && out[w.next(k)]) : (y[k] || (x[k] && out[w.next(k)]));
        }
      }
      return out;
    }
  }
  return out;
}

inline bool holds(const Ltl::P& f, const Lasso& w) { return evaluate(*f, w)[0]; }

// Buchi acceptance of a lasso word by search over (state, position) pairs.
inline bool accepts(const Nba& nba, const Lasso& w) {
  const std::size_t n = w.size(), q = nba.num_states();
  auto id = [&](std::size_t s, std::size_t i) { return s * n + i; };
  auto successors = [&](std::size_t node) {
    std::vector<std::size_t> out;
    const std::size_t s = node / n, i = node % n;
    for (const auto& t : nba.transitions()) {
      if (t.from == s && t.guard.eval(w.at(i))) out.push_back(id(t.to, w.next(i)));
    }
    return out;
  };
  std::vector<bool> reach(q * n, false);
  std::vector<std::size_t> stack;
  for (auto s : nba.initial()) {
    reach[id(s, 0)] = true;
    stack.push_back(id(s, 0));
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto u : successors(v)) {
      if (!reach[u]) {
        reach[u] = true;
        stack.push_back(u);
      }
    }
  }
  // The run visits `node` after reading the letter before it; accepting means
  // some reachable accepting node lies on a cycle.
  for (std::size_t v = 0; v < q * n; ++v) {
    if (!reach[v] || !nba.is_accepting(v / n)) continue;
    std::vector<bool> seen(q * n, false);
    stack = successors(v);
    for (auto u : stack) seen[u] = true;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      if (x == v) return true;
      for (auto u : successors(x)) {
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
  }
  return false;
}

// The benchmark patrol formula over A=1, B=2, C=4, D=8.
inline Ltl::P phi_b() {
  using L = Ltl;
  auto A = L::prop(1), B = L::prop(2), C = L::prop(4), D = L::prop(8);
  auto none = [](L::P x, L::P y, L::P z) { return L::conj(L::neg(x), L::conj(L::neg(y), L::neg(z))); };
  auto phi3 = L::conj(D, L::next(L::until(none(D, C, B), A)));
  auto phi2 = L::conj(C, L::next(L::until(none(C, B, A), phi3)));
  auto phi1 = L::conj(B, L::next(L::until(none(B, A, D), phi2)));
  return L::always(L::implies(A, L::next(L::until(none(A, D, C), phi1))));
}

inline Guard random_guard(std::mt19937_64& rng, std::size_t props, int depth) {
  if (depth == 0 || rng() % 4 == 0) {
    const auto roll = rng() % 10;
    if (roll == 0) return Guard::truth();
    if (roll == 1) return Guard::falsity();
    return Guard::prop(rng() % props);
  }
  switch (rng() % 3) {
    case 0:
      return Guard::negate(random_guard(rng, props, depth - 1));
    case 1:
      return Guard::conj(random_guard(rng, props, depth - 1), random_guard(rng, props, depth - 1));
    default:
      return Guard::disj(random_guard(rng, props, depth - 1), random_guard(rng, props, depth - 1));
  }
}

// Same Boolean function as `g` written as a disjunction of full minterms.
inline Guard minterm_form(const Guard& g, std::size_t props) {
  Guard out = Guard::falsity();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << props); ++bits) {
    if (!g.eval(bits)) continue;
    Guard term = Guard::truth();
    for (std::size_t i = 0; i < props; ++i) {
      term = Guard::conj(term, (bits >> i) & 1 ? Guard::prop(i) : Guard::negate(Guard::prop(i)));
    }
    out = Guard::disj(out, term);
  }
  return out;
}

// Reference single-source lexicographic Dijkstra over finite edges.
inline std::vector<Weight> dijkstra_from(const Digraph& g, std::vector<StateId> sources, bool reverse = false) {
  std::vector<Weight> dist(g.num_nodes(), Weight::infinity());
  using Item = std::pair<Weight, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto s : sources) {
    dist[s] = Weight::zero();
    pq.push({Weight::zero(), s});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    for (auto e : reverse ? g.in(v) : g.out(v)) {
      const Edge& edge = g.edge(e);
      const StateId u = reverse ? edge.from : edge.to;
      const Weight nd = d + edge.weight;
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return dist;
}

}  // namespace testing
