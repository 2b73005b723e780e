#include <doctest.h>

#include <random>

#include "ltldstar/baselines.hpp"
#include "ltldstar/errors.hpp"
#include "ltldstar/planner.hpp"
#include "ltldstar/world.hpp"
#include "support.hpp"

using namespace ltldstar;

namespace {

std::shared_ptr<const Nba> patrol() {
  return std::make_shared<const Nba>(sequencing_nba({"A", "B", "C", "D"}));
}

void check_run_shape(const ProductAutomaton& pa, const Run& run, std::int64_t beta) {
  REQUIRE_FALSE(run.prefix.empty());
  REQUIRE(run.suffix.size() >= 2);
  CHECK(run.prefix.back() == run.suffix.front());
  CHECK(run.suffix.back() == run.suffix.front());
  CHECK(pa.is_accepting(run.accepting_state()));
  CHECK(pa.accepting_states()[run.accepting_index] == run.accepting_state());
  CHECK(path_weight(pa.graph(), run.prefix) == run.prefix_cost);
  CHECK(path_weight(pa.graph(), run.suffix) == run.suffix_cost);
  CHECK(total_cost(run, beta) == run.total);
  CHECK(run.total == run.prefix_cost + run.suffix_cost.scaled(beta));
}

}  // namespace

TEST_CASE("initial and replanned runs equal the oracle along a robot walk") {
  for (ProductMode mode : {ProductMode::kPlain, ProductMode::kRelaxed}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      GridScenario s = random_map(seed, 8, 0.4);
      GridEnvironment env(s);
      auto nba = patrol();
      const Wts wts = env.initial_wts(nba->ap());
      ProductAutomaton shadow = build(wts, nba, mode);
      PlannerOptions opts;
      opts.beta = 10;
      opts.wts_heuristic = env.heuristic();
      Planner planner(build(wts, nba, mode), opts);
      const auto starts = planner.pa().initial_states_at(env.start());
      Run run = planner.plan_initial(starts);
      check_run_shape(planner.pa(), run, 10);
      REQUIRE(run.total == dijkstra_oracle(shadow, starts, 10).best_total);
      for (int step = 0; step < 60; ++step) {
        const StateId cur = planner.current_state();
        const auto changes = env.sense(planner.pa().wts_state(cur));
        if (!changes.empty()) {
          for (const auto& c : changes) shadow.apply(c);
          run = planner.replan(changes, cur);
          check_run_shape(planner.pa(), run, 10);
          const StateId from[] = {cur};
          REQUIRE(run.total == dijkstra_oracle(shadow, from, 10).best_total);
          CHECK(run.prefix.front() == cur);
        }
        planner.advance();
      }
    }
  }
}

TEST_CASE("threaded suffix updates and the heuristic do not change results") {
  GridScenario s = random_map(3, 10, 0.4);
  auto nba = patrol();
  std::vector<Weight> totals[3];
  for (int variant = 0; variant < 3; ++variant) {
    GridEnvironment env(s);
    PlannerOptions opts;
    opts.threads = variant == 1 ? 4 : 1;
    if (variant != 2) opts.wts_heuristic = env.heuristic();
    Planner planner(build_product(env.initial_wts(nba->ap()), nba), opts);
    totals[variant].push_back(planner.plan_initial(planner.pa().initial_states_at(env.start())).total);
    for (int step = 0; step < 40; ++step) {
      const StateId cur = planner.current_state();
      const auto changes = env.sense(planner.pa().wts_state(cur));
      if (!changes.empty()) totals[variant].push_back(planner.replan(changes, cur).total);
      planner.advance();
    }
  }
  CHECK(totals[0] == totals[1]);
  CHECK(totals[0] == totals[2]);
}

TEST_CASE("plain planning reports infeasibility and the relaxed product still plans") {
  GridScenario s = benchmark_map(20, MapVariant::kBlockedC);
  auto nba = patrol();
  const Wts full = to_wts(s, Belief::omniscient(s), nba->ap());
  Planner plain(build_product(full, nba), {});
  const auto starts = plain.pa().initial_states_at(s.index(s.start));
  CHECK_THROWS_AS(plain.plan_initial(starts), NoAcceptingRun);

  const auto relaxed_pa = build_relaxed_product(full, nba);
  Planner relaxed(relaxed_pa, {});
  const Run run = relaxed.plan_initial(starts);
  CHECK(run.total.violation() > 0);
  CHECK(run.total == dijkstra_oracle(relaxed_pa, starts, 10).best_total);
}

TEST_CASE("planner stays usable after an infeasible replan") {
  auto ap = std::make_shared<const APUniverse>(std::vector<std::string>{"A", "B"});
  auto nba = std::make_shared<const Nba>(sequencing_nba({"A", "B"}));
  // Line 0 - 1(A) - 2 - 3(B), bidirectional.
  Wts wts(ap, {0, 0b01, 0, 0b10}, {0});
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    wts.add_edge(i, i + 1, 10);
    wts.add_edge(i + 1, i, 10);
  }
  Planner planner(build_product(wts, nba), {});
  const Run first = planner.plan_initial();
  CHECK(first.total.is_finite());
  const StateId cur = planner.current_state();
  const WtsChange cut[] = {{WtsChange::Kind::kDelete, 2, 3}, {WtsChange::Kind::kDelete, 3, 2}};
  CHECK_THROWS_AS(planner.replan(cut, cur), NoAcceptingRun);
  const WtsChange repair[] = {{WtsChange::Kind::kReweight, 2, 3, 20}, {WtsChange::Kind::kReweight, 3, 2, 20}};
  const Run again = planner.replan(repair, cur);
  CHECK(again.total.is_finite());
  CHECK(again.total > first.total);
}

TEST_CASE("planner rejects bad requests") {
  auto nba = patrol();
  GridScenario s = random_map(1, 8, 0.2);
  Planner planner(build_product(to_wts(s, Belief(s.num_cells()), nba->ap()), nba), {});
  const WtsChange none[] = {{WtsChange::Kind::kDelete, 0, 1}};
  CHECK_THROWS_AS(planner.replan(none, 0), UsageError);
  planner.plan_initial(planner.pa().initial_states_at(s.index(s.start)));
  CHECK_THROWS_AS(planner.replan(none, 1u << 30), UsageError);
}
