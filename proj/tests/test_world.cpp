#include <doctest.h>

#include <json.hpp>
#include <random>
#include <set>

#include "ltldstar/errors.hpp"
#include "ltldstar/world.hpp"
#include "support.hpp"

using namespace ltldstar;

namespace {

SharedUniverse abcd() {
  return std::make_shared<const APUniverse>(std::vector<std::string>{"A", "B", "C", "D"});
}

std::shared_ptr<const Nba> patrol() {
  return std::make_shared<const Nba>(sequencing_nba({"A", "B", "C", "D"}));
}

GridScenario empty_grid(int n) {
  GridScenario s;
  s.width = s.height = n;
  s.start = {0, 0};
  s.regions = {{"A", {{0, 1}}}, {"B", {{1, 0}}}, {"C", {{n - 1, n - 1}}}, {"D", {{n - 1, 0}}}};
  return s;
}

// (from, to) -> weight over live edges.
std::map<std::pair<std::size_t, std::size_t>, std::int64_t> live_edges(const Wts& w) {
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> out;
  for (const auto& e : w.edges()) {
    if (e.weight != Weight::kInf) out[{e.from, e.to}] = e.weight;
  }
  return out;
}

}  // namespace

TEST_CASE("empty 10x10 grid has 100 states and 360 transitions") {
  const GridScenario s = empty_grid(10);
  const Wts w = to_wts(s, Belief(s.num_cells()), abcd());
  CHECK(w.num_states() == 100);
  CHECK(w.num_edges() == 360);
  CHECK(w.label(s.index({0, 1})) == Label::of(abcd(), {"A"}));
  CHECK(w.initial() == std::vector<std::size_t>{0});
  CHECK(w.name(s.index({3, 4})) == "3,4");
}

TEST_CASE("walls and believed objects shape the transitions") {
  GridScenario s = empty_grid(4);
  s.walls = {{{1, 1}, {1, 2}}};
  s.obstacles = {{2, 2}};
  s.bumps = {{0, 3}};
  const auto plain = live_edges(to_wts(s, Belief(s.num_cells()), abcd()));
  CHECK_FALSE(plain.count({s.index({1, 1}), s.index({1, 2})}));
  CHECK_FALSE(plain.count({s.index({1, 2}), s.index({1, 1})}));
  CHECK(plain.at({s.index({2, 1}), s.index({2, 2})}) == 10);
  const auto known = live_edges(to_wts(s, Belief::omniscient(s), abcd()));
  CHECK_FALSE(known.count({s.index({2, 1}), s.index({2, 2})}));
  CHECK(known.at({s.index({2, 2}), s.index({2, 1})}) == 10);
  CHECK(known.at({s.index({0, 2}), s.index({0, 3})}) == 50);
}

TEST_CASE("sensing is idempotent and reproduces the believed WTS") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridScenario s = random_map(seed, 12, 0.4);
    Belief belief(s.num_cells());
    Wts incremental = to_wts(s, belief, abcd());
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 40; ++i) {
      const Cell pos = s.cell(rng() % s.num_cells());
      const auto changes = sense(s, belief, pos);
      for (const auto& c : changes) {
        incremental.set_weight(*incremental.find_edge(c.from, c.to),
                               c.kind == WtsChange::Kind::kDelete ? Weight::kInf : c.weight);
      }
      CHECK(sense(s, belief, pos).empty());
      REQUIRE(live_edges(incremental) == live_edges(to_wts(s, belief, abcd())));
    }
  }
}

TEST_CASE("grid heuristic is consistent and admissible on every map") {
  std::vector<GridScenario> maps;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) maps.push_back(random_map(seed, 10, 0.4));
  for (auto v : {MapVariant::kA, MapVariant::kB, MapVariant::kBlockedC}) maps.push_back(benchmark_map(20, v));
  for (const auto& s : maps) {
    const Wts w = to_wts(s, Belief::omniscient(s), abcd());
    const auto h = grid_heuristic(s);
    for (std::size_t t = 0; t < w.num_states(); t += 7) {
      for (const auto& e : w.edges()) {
        if (e.weight == Weight::kInf) continue;
        REQUIRE(h(e.from, t) <= e.weight + h(e.to, t));
      }
    }
    // Admissible: never above the true distance.
    Digraph g(w.num_states());
    for (const auto& e : w.edges()) g.add_edge(static_cast<StateId>(e.from), static_cast<StateId>(e.to), Weight(0, e.weight));
    const auto d = testing::dijkstra_from(g, {static_cast<StateId>(s.index(s.start))});
    for (std::size_t t = 0; t < w.num_states(); ++t) {
      if (d[t].is_finite()) REQUIRE(h(s.index(s.start), t) <= d[t].travel());
    }
  }
}

TEST_CASE("random maps are deterministic and well formed") {
  const GridScenario a = random_map(9, 20, 0.4), b = random_map(9, 20, 0.4);
  CHECK(scenario_to_json(a) == scenario_to_json(b));
  CHECK(scenario_to_json(a) != scenario_to_json(random_map(10, 20, 0.4)));
  a.validate();
  const int h = 10;
  for (auto c : a.obstacles) {
    CHECK(c.row != 0);
    CHECK(c.col != 0);
    CHECK(c.row != h);
    CHECK(c.col != h);
    CHECK(c.row != 19);
    CHECK(c.col != 19);
  }
  CHECK(a.regions.at("A").front().row < h);
  CHECK(a.regions.at("A").front().col < h);
  CHECK(a.regions.at("C").front().row > h);
  CHECK(a.regions.at("C").front().col > h);
  CHECK_THROWS_AS(random_map(1, 3, 0.4), UsageError);
  CHECK_THROWS_AS(random_map(1, 10, 1.0), UsageError);
}

TEST_CASE("benchmark maps: (a) and (b) feasible, blocked-C infeasible") {
  auto nba = patrol();
  auto feasible = [&](const GridScenario& s) {
    const auto pa = build_product(to_wts(s, Belief::omniscient(s), nba->ap()), nba);
    return dijkstra_oracle(pa, pa.initial_states_at(s.index(s.start)), 10).best_total.is_finite();
  };
  CHECK(feasible(benchmark_map(20, MapVariant::kA)));
  CHECK(feasible(benchmark_map(20, MapVariant::kB)));
  CHECK_FALSE(feasible(benchmark_map(20, MapVariant::kBlockedC)));
  CHECK(feasible(benchmark_map(50, MapVariant::kB)));
  CHECK_THROWS_AS(benchmark_map(11, MapVariant::kA), UsageError);
}

TEST_CASE("shipped scenarios equal their generators and round-trip") {
  CHECK(testing::read_text("data/scenarios/map_a.json") == scenario_to_json(benchmark_map(20, MapVariant::kA)));
  CHECK(testing::read_text("data/scenarios/map_b.json") == scenario_to_json(benchmark_map(20, MapVariant::kB)));
  CHECK(testing::read_text("data/scenarios/map_b_blocked.json") ==
        scenario_to_json(benchmark_map(20, MapVariant::kBlockedC)));
  const GridScenario s = random_map(2, 10, 0.4);
  CHECK(scenario_to_json(parse_scenario(scenario_to_json(s))) == scenario_to_json(s));
}

TEST_CASE("scenario parsing rejects invalid input") {
  CHECK_THROWS_AS(parse_scenario("{"), ParseError);
  auto doc = nlohmann::json::parse(scenario_to_json(empty_grid(5)));
  auto bad_start = doc;
  bad_start["start"] = {7, 7};
  CHECK_THROWS_AS(parse_scenario(bad_start.dump()), UsageError);
  auto bad_wall = doc;
  bad_wall["walls"] = {{{0, 0}, {2, 2}}};
  CHECK_THROWS_AS(parse_scenario(bad_wall.dump()), UsageError);
  auto overlap = doc;
  overlap["obstacles"] = {{0, 1}};
  CHECK_THROWS_AS(parse_scenario(overlap.dump()), UsageError);
  CHECK_THROWS_AS(to_wts(empty_grid(5), Belief(25),
                         std::make_shared<const APUniverse>(std::vector<std::string>{"Z"})),
                  UsageError);
}

TEST_CASE("waypoint scenario reveals hidden changes at their source") {
  WaypointEnvironment env(testing::read_text("data/scenarios/delivery_6x6.json"));
  const Wts w = env.initial_wts(env.ap());
  CHECK(w.num_states() == 36);
  CHECK(w.name(env.start()) == "0,0");
  const auto full = live_edges(env.full_wts(env.ap()));
  CHECK(full.size() < live_edges(w).size());
  const std::size_t at = *w.state_named("1,2");
  const auto first = env.sense(at);
  REQUIRE(first.size() == 1);
  CHECK(first[0].kind == WtsChange::Kind::kDelete);
  CHECK(w.name(first[0].to) == "2,2");
  CHECK(env.sense(at).empty());
  CHECK_THROWS_AS(env.initial_wts(abcd()), UsageError);
}

TEST_CASE("simulation on the blocked-C map: plain halts, relaxed violates") {
  auto nba = patrol();
  SimulationOptions opts;
  GridEnvironment plain_env(benchmark_map(20, MapVariant::kBlockedC));
  const auto plain = simulate(plain_env, nba, opts);
  CHECK(plain.halted);
  CHECK(plain.loops_completed == 0);
  opts.mode = ModeSelect::kRelaxed;
  opts.check_oracle = true;
  GridEnvironment relaxed_env(benchmark_map(20, MapVariant::kBlockedC));
  const auto relaxed = simulate(relaxed_env, nba, opts);
  CHECK_FALSE(relaxed.halted);
  CHECK(relaxed.loops_completed == 1);
  CHECK(relaxed.records.back().total.violation() > 0);
  for (const auto& r : relaxed.records) CHECK(r.total == *r.oracle_total);
}

TEST_CASE("auto mode finds zero-violation runs when the task is feasible") {
  auto nba = patrol();
  SimulationOptions opts;
  opts.mode = ModeSelect::kAuto;
  GridEnvironment env(random_map(5, 10, 0.4));
  const auto r = simulate(env, nba, opts);
  CHECK_FALSE(r.halted);
  CHECK(r.mode == ProductMode::kRelaxed);
  for (const auto& rec : r.records) CHECK(rec.total.violation() == 0);
}

TEST_CASE("simulation completes the requested number of loops") {
  auto nba = std::make_shared<const Nba>(parse_nba(testing::read_text("data/nba/delivery.hoa")));
  WaypointEnvironment env(testing::read_text("data/scenarios/delivery_6x6.json"));
  SimulationOptions opts;
  opts.loops = 2;
  opts.check_oracle = true;
  const auto r = simulate(env, nba, opts);
  CHECK(r.loops_completed == 2);
  CHECK(r.num_replans() > 0);
  for (const auto& rec : r.records) CHECK(rec.total == *rec.oracle_total);
  CHECK(r.trajectory.front() == r.trajectory.back());
}

TEST_CASE("trace formats are stable") {
  CHECK(trace_csv_header() == "event,phase,mod_size,wall_ns,expansions,total_violation,total_travel\n");
  auto nba = patrol();
  GridEnvironment env(random_map(1, 10, 0.4));
  const auto r = simulate(env, nba, {});
  const std::string csv = trace_to_csv(r);
  CHECK(csv.rfind(trace_csv_header(), 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.records.size() + 1);
  const auto doc = nlohmann::json::parse(trace_to_json(r));
  for (const char* key : {"algorithm", "mode", "beta", "product_states", "halted", "loops_completed", "replans",
                          "fallbacks", "traversed", "trajectory", "events"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["events"].size() == r.records.size());
  CHECK(doc["algorithm"] == "ltl-dstar");
}
