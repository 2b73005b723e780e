#include <doctest.h>

#include <random>

#include "ltldstar/errors.hpp"
#include "ltldstar/nba.hpp"
#include "support.hpp"

using namespace ltldstar;
using testing::Ltl;

namespace {

const char* kTwoState = R"(HOA: v1
name: "GF a"
States: 2
Start: 0
AP: 2 "a" "b"
acc-name: Buchi
Acceptance: 1 Inf(0)
properties: trans-labels explicit-labels
--BODY--
State: 0
  [0] 1
  [!0] 0
State: 1 {0}
  [t] 0
  [0 & !1] 1
--END--
)";

std::vector<std::uint64_t> all_letters(std::size_t r) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << r); ++b) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("HOA parsing of the supported subset") {
  const Nba nba = parse_nba(kTwoState);
  CHECK(nba.num_states() == 2);
  CHECK(nba.initial() == std::vector<std::size_t>{0});
  CHECK(nba.ap()->names() == std::vector<std::string>{"a", "b"});
  CHECK(nba.is_accepting(1));
  CHECK_FALSE(nba.is_accepting(0));
  CHECK(nba.transitions().size() == 4);
  CHECK(nba.enabled(1, 1, 0b01));
  CHECK_FALSE(nba.enabled(1, 1, 0b11));
  CHECK(nba.pairs().size() == 4);
}

TEST_CASE("HOA round trip preserves the language-relevant structure") {
  const Nba a = parse_nba(kTwoState);
  const Nba b = parse_nba(to_hoa(a, "copy"));
  REQUIRE(b.num_states() == a.num_states());
  REQUIRE(b.transitions().size() == a.transitions().size());
  for (std::size_t i = 0; i < a.transitions().size(); ++i) {
    CHECK(a.transitions()[i].from == b.transitions()[i].from);
    CHECK(a.transitions()[i].to == b.transitions()[i].to);
    for (std::uint64_t bits = 0; bits < 4; ++bits) {
      CHECK(a.transitions()[i].guard.eval(bits) == b.transitions()[i].guard.eval(bits));
    }
  }
}

TEST_CASE("HOA errors carry positions or name the unsupported feature") {
  std::string bad = kTwoState;
  bad.replace(bad.find("[0] 1"), 5, "[0 & ] 1");
  try {
    parse_nba(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 11);
  }
  std::string rabin = kTwoState;
  rabin.replace(rabin.find("Acceptance: 1 Inf(0)"), 20, "Acceptance: 2 Fin(0) & Inf(1)");
  CHECK_THROWS_AS(parse_nba(rabin), UnsupportedFeature);
  std::string tba = kTwoState;
  tba.replace(tba.find("[t] 0"), 5, "[t] 0 {0}");
  CHECK_THROWS_AS(parse_nba(tba), UnsupportedFeature);
  std::string range = kTwoState;
  range.replace(range.find("[t] 0"), 5, "[t] 7");
  CHECK_THROWS_AS(parse_nba(range), ParseError);
  CHECK_THROWS_AS(parse_nba("HOA: v2\n"), ParseError);
}

TEST_CASE("chi equals brute-force enumeration over all labels") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    const std::size_t r = 1 + rng() % 6;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < r; ++i) names.push_back("p" + std::to_string(i));
    auto u = std::make_shared<const APUniverse>(names);
    std::vector<NbaTransition> ts;
    for (int t = 0; t < 3; ++t) ts.push_back({0, testing::random_guard(rng, r, 3), rng() % 2});
    const Nba nba(u, 2, {0}, {false, true}, ts);
    for (std::size_t to = 0; to < 2; ++to) {
      std::vector<std::uint64_t> brute;
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << r); ++b) {
        bool any = false;
        for (const auto& t : ts) any = any || (t.to == to && t.guard.eval(b));
        if (any) brute.push_back(b);
      }
      std::vector<std::uint64_t> got;
      for (const auto& l : chi(nba, 0, to)) got.push_back(l.bits());
      CHECK(got == brute);
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << r); ++b) {
        const auto mv = min_violation(nba, 0, to, b);
        if (brute.empty()) {
          CHECK_FALSE(mv);
          continue;
        }
        int best = 64;
        for (auto c : brute) best = std::min(best, rho_bits(b, c));
        CHECK(mv == best);
      }
    }
  }
}

TEST_CASE("violation is invariant under equivalent guard rewriting") {
  std::mt19937_64 rng(5);
  for (int pair = 0; pair < 50; ++pair) {
    const std::size_t r = 2 + rng() % 4;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < r; ++i) names.push_back("p" + std::to_string(i));
    auto u = std::make_shared<const APUniverse>(names);
    const Guard g = testing::random_guard(rng, r, 4);
    const Guard h = testing::minterm_form(g, r);
    const Nba a(u, 2, {0}, {false, true}, {{0, g, 1}});
    const Nba b(u, 2, {0}, {false, true}, {{0, h, 1}});
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << r); ++bits) {
      CHECK(min_violation(a, 0, 1, bits) == min_violation(b, 0, 1, bits));
    }
  }
}

TEST_CASE("sequencing automaton accepts exactly phi_b and GF A on single-region words") {
  const Nba nba = sequencing_nba({"A", "B", "C", "D"});
  CHECK(nba.num_states() == 6);
  const auto spec = Ltl::conj(testing::phi_b(), Ltl::always(Ltl::eventually(Ltl::prop(1))));
  std::mt19937_64 rng(3);
  const std::vector<std::uint64_t> singles{0, 1, 2, 4, 8};
  int accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto w = testing::random_lasso(rng, singles, 5, 8);
    const bool expect = testing::holds(spec, w);
    if (testing::accepts(nba, w) != expect) {
      std::string text;
      for (auto l : w.stem) text += std::to_string(l) + " ";
      text += "| ";
      for (auto l : w.loop) text += std::to_string(l) + " ";
      INFO(text);
      REQUIRE(testing::accepts(nba, w) == expect);
    }
    accepted += expect;
  }
  // The canonical patrol word is in the language.
  CHECK(testing::accepts(nba, {{}, {1, 0, 2, 4, 0, 8}}));
  CHECK(accepted > 0);
}

TEST_CASE("shipped 32-state automaton accepts exactly phi_b over all letters") {
  const Nba nba = parse_nba(testing::read_text("data/nba/phi_b_32.hoa"));
  CHECK(nba.num_states() == 32);
  CHECK(nba.ap()->names() == std::vector<std::string>{"A", "B", "C", "D"});
  const auto spec = testing::phi_b();
  std::mt19937_64 rng(4);
  const auto letters = all_letters(4);
  for (int i = 0; i < 5000; ++i) {
    const auto w = testing::random_lasso(rng, letters, 4, 6);
    REQUIRE(testing::accepts(nba, w) == testing::holds(spec, w));
  }
  const std::vector<std::uint64_t> singles{0, 1, 2, 4, 8};
  for (int i = 0; i < 5000; ++i) {
    const auto w = testing::random_lasso(rng, singles, 5, 9);
    REQUIRE(testing::accepts(nba, w) == testing::holds(spec, w));
  }
}

TEST_CASE("shipped minimal automaton file matches its generator") {
  CHECK(testing::read_text("data/nba/phi_b.hoa") ==
        to_hoa(sequencing_nba({"A", "B", "C", "D"}), "A-B-C-D patrol, sequencing form"));
}

TEST_CASE("delivery automaton visits its targets in order forever") {
  const Nba nba = parse_nba(testing::read_text("data/nba/delivery.hoa"));
  // A B E C E D E F E with A=1 B=2 C=4 D=8 E=16 F=32.
  const std::vector<std::uint64_t> tour{1, 2, 16, 4, 16, 8, 16, 32, 16};
  CHECK(testing::accepts(nba, {{}, tour}));
  CHECK(testing::accepts(nba, {{0, 0}, {1, 0, 2, 0, 16, 4, 16, 8, 16, 32, 0, 16, 0}}));
  CHECK_FALSE(testing::accepts(nba, {{}, {1, 0}}));
  CHECK_FALSE(testing::accepts(nba, {{}, {1, 2, 2, 16, 4, 16, 8, 16, 32, 16}}));
  CHECK_FALSE(testing::accepts(nba, {{}, {1, 2, 16, 8, 16, 4, 16, 32, 16}}));
}

TEST_CASE("automaton construction rejects malformed input") {
  auto u = std::make_shared<const APUniverse>(std::vector<std::string>{"a"});
  CHECK_THROWS_AS(Nba(u, 0, {0}, {}, {}), UsageError);
  CHECK_THROWS_AS(Nba(u, 1, {}, {true}, {}), UsageError);
  CHECK_THROWS_AS(Nba(u, 1, {0}, {true}, {{0, Guard::prop(3), 0}}), UsageError);
  CHECK_THROWS_AS(sequencing_nba({"A"}), UsageError);
}
