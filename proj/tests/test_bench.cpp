#include <doctest.h>

#include <sstream>

#include "ltldstar/bench.hpp"
#include "ltldstar/errors.hpp"
#include "support.hpp"

using namespace ltldstar;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

BenchConfig small_config() {
  BenchConfig c;
  c.sizes = {10};
  c.seeds = {1, 2};
  return c;
}

}  // namespace

TEST_CASE("box statistics follow the Tukey rule with linear quartiles") {
  CHECK_FALSE(box_stats({}).has_value());
  const auto one = box_stats({4});
  CHECK(one->lower == 4);
  CHECK(one->upper == 4);
  const auto a = box_stats({9, 1, 8, 2, 7, 3, 6, 4, 5});
  CHECK(a->q1 == doctest::Approx(3));
  CHECK(a->median == doctest::Approx(5));
  CHECK(a->q3 == doctest::Approx(7));
  CHECK(a->lower == 1);
  CHECK(a->upper == 9);
  const auto b = box_stats({1, 2, 3, 4, 5, 6, 7, 8, 9, 100});
  CHECK(b->q1 == doctest::Approx(3.25));
  CHECK(b->median == doctest::Approx(5.5));
  CHECK(b->q3 == doctest::Approx(7.75));
  CHECK(b->upper == 9);
}

TEST_CASE("bench config parsing and validation") {
  const auto c = parse_bench_config(testing::read_text("data/bench/smoke.json"));
  CHECK(c.sizes == std::vector<int>{10});
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(c.algorithms.size() == 3);
  CHECK(c.output == "bench_smoke.csv");
  CHECK_NOTHROW(parse_bench_config(testing::read_text("data/bench/sweep.json")).validate());
  CHECK_THROWS_AS(parse_bench_config(R"({"algorithms": []})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config(R"({"algorithms": ["astar"]})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config(R"({"sizes": [2]})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config(R"({"density": 1.5})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config(R"({"beta": 0})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config(R"({"map": "z"})"), UsageError);
  CHECK_THROWS_AS(parse_bench_config("[1"), ParseError);
}

TEST_CASE("bench output schema is stable") {
  CHECK(bench_csv_header() ==
        "size,seed,algorithm,mode,status,replans,fallbacks,time_lower_ns,time_q1_ns,time_median_ns,"
        "time_q3_ns,time_upper_ns,initial_ns,final_violation,final_travel,loop_violation,loop_travel,"
        "loops_completed\n");
  CHECK(bench_summary_header() ==
        "size,algorithm,runs,replans,median_replan_ns,speedup_vs_iterative,mean_loop_violation,"
        "mean_loop_travel\n");
}

TEST_CASE("bench rows are ordered, complete and deterministic apart from timing") {
  const BenchConfig c = small_config();
  const auto a = run_bench(c);
  BenchConfig threaded = c;
  threaded.workers = 3;
  const auto b = run_bench(threaded);
  REQUIRE(a.size() == 6);
  REQUIRE(b.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].size == b[i].size);
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].algorithm == b[i].algorithm);
    CHECK(a[i].status == "ok");
    CHECK(a[i].replans == b[i].replans);
    CHECK(a[i].final_total == b[i].final_total);
    CHECK(a[i].loop_cost == b[i].loop_cost);
    CHECK(a[i].replan_ns.size() == a[i].replans);
  }
  CHECK(a[0].seed == 1);
  CHECK(a[0].algorithm == Algorithm::kLtlDStar);
  CHECK(a[1].algorithm == Algorithm::kIterative);
  CHECK(a[3].seed == 2);

  const auto rows = parse_csv(bench_to_csv(a));
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) CHECK(r.size() == 18);
  CHECK(rows[1][2] == "ltl-dstar");
  CHECK(rows[1][4] == "ok");
}

TEST_CASE("summary speedup is the iterative median over each algorithm's median") {
  const auto rows = run_bench(small_config());
  std::map<Algorithm, std::vector<double>> samples;
  for (const auto& r : rows) {
    for (auto ns : r.replan_ns) samples[r.algorithm].push_back(static_cast<double>(ns));
  }
  const double iterative = box_stats(samples[Algorithm::kIterative])->median;
  const auto csv = parse_csv(bench_summary_csv(rows));
  REQUIRE(csv.size() == 4);
  for (std::size_t i = 1; i < csv.size(); ++i) {
    REQUIRE(csv[i].size() == 8);
    const Algorithm algo = parse_algorithm(csv[i][1]);
    CHECK(csv[i][2] == "2");
    CHECK(std::stoul(csv[i][3]) == samples[algo].size());
    const double median = box_stats(samples[algo])->median;
    CHECK(std::stod(csv[i][4]) == doctest::Approx(median).epsilon(0.001));
    CHECK(std::stod(csv[i][5]) == doctest::Approx(iterative / median).epsilon(0.002));
  }
}

TEST_CASE("infeasible benchmark runs become flagged rows") {
  BenchConfig c;
  c.sizes = {20};
  c.seeds = {1};
  c.map = "blocked-c";
  c.algorithms = {Algorithm::kLtlDStar};
  const auto rows = run_bench(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "halted");
  CHECK(rows[0].loop_cost.is_infinite());
  const auto csv = parse_csv(bench_to_csv(rows));
  CHECK(csv[1][15] == "inf");
}
