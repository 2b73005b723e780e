#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltldstar/world.hpp"

namespace ltldstar {

struct BenchConfig {
  std::vector<int> sizes{10, 20, 50};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double density = 0.4;
  std::int64_t beta = 10;
  ModeSelect mode = ModeSelect::kPlain;
  std::vector<Algorithm> algorithms{Algorithm::kLtlDStar, Algorithm::kIterative,
                                    Algorithm::kLocalRevision};
  std::size_t loops = 1;
  /// "random" (seeded random maps) or a benchmark map: "a", "b", "blocked-c".
  std::string map = "random";
  std::string nba_file;  // empty: built-in A-B-C-D sequencing automaton
  std::string output = "bench.csv";
  std::string summary = "bench_summary.csv";
  unsigned workers = 1;

  /// Throws UsageError.
  void validate() const;
};

/// Parses the JSON config; relative file paths stay as written.
BenchConfig parse_bench_config(std::string_view json_text);

/// Tukey box statistics of per-replan wall times (ns): whiskers are the most
/// extreme samples within 1.5 IQR of the quartiles. Quartiles interpolate
/// linearly between order statistics.
struct BoxStats {
  double lower = 0, q1 = 0, median = 0, q3 = 0, upper = 0;
};
std::optional<BoxStats> box_stats(std::vector<double> samples);

struct BenchRow {
  int size = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kLtlDStar;
  ProductMode mode = ProductMode::kPlain;
  std::string status;  // ok | halted | error: <message>
  std::size_t replans = 0;
  std::size_t fallbacks = 0;
  std::optional<BoxStats> time_ns;
  std::int64_t initial_ns = 0;
  Weight final_total = Weight::infinity();
  Weight loop_cost = Weight::infinity();  // executed cost until the loops are done
  std::size_t loops_completed = 0;
  std::vector<std::int64_t> replan_ns;  // raw samples (not written to the CSV)
};

/// Runs every (size, seed, algorithm) combination; failures become flagged
/// rows. Row order follows the config order regardless of `workers`.
std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string bench_csv_header();
std::string bench_to_csv(const std::vector<BenchRow>& rows);

std::string bench_summary_header();
/// Per size and algorithm: pooled median replan time, the speedup of each
/// algorithm's median over the iterative baseline, and mean executed loop
/// cost over the runs that completed.
std::string bench_summary_csv(const std::vector<BenchRow>& rows);

}  // namespace ltldstar
