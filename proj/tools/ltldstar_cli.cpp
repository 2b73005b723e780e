#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "ltldstar/bench.hpp"
#include "ltldstar/errors.hpp"
#include "ltldstar/nba.hpp"
#include "ltldstar/product.hpp"
#include "ltldstar/world.hpp"

namespace {

using namespace ltldstar;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoRun = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::shared_ptr<const Nba> load_nba(const std::string& path) {
  if (path.empty()) return std::make_shared<const Nba>(sequencing_nba({"A", "B", "C", "D"}));
  return std::make_shared<const Nba>(parse_nba(read_file(path)));
}

bool is_waypoint(const std::string& text) {
  try {
    return json::parse(text).contains("states");
  } catch (const json::exception&) {
    return false;
  }
}

// "random:N[:density]" or a scenario file (grid or waypoint JSON).
std::unique_ptr<Environment> load_environment(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("random:", 0) == 0) {
    std::istringstream in(spec.substr(7));
    int n = 0;
    double density = 0.4;
    char sep = 0;
    if (!(in >> n)) throw UsageError("bad random scenario '" + spec + "'");
    if (in >> sep && (sep != ':' || !(in >> density))) throw UsageError("bad random scenario '" + spec + "'");
    return std::make_unique<GridEnvironment>(random_map(seed, n, density));
  }
  const std::string text = read_file(spec);
  if (is_waypoint(text)) return std::make_unique<WaypointEnvironment>(text);
  return std::make_unique<GridEnvironment>(parse_scenario(text));
}

int cmd_build(const std::string& nba_path, const std::string& scenario, bool relaxed) {
  auto nba = load_nba(nba_path);
  auto env = load_environment(scenario, 1);
  const Wts wts = env->initial_wts(nba->ap());
  const ProductAutomaton plain = build_product(wts, nba);
  json out;
  out["nba_states"] = nba->num_states();
  out["nba_transitions"] = nba->transitions().size();
  out["wts_states"] = wts.num_states();
  out["wts_transitions"] = wts.num_live_edges();
  out["product_states"] = plain.num_states();
  out["product_transitions"] = plain.graph().num_finite_edges();
  if (relaxed) {
    const ProductAutomaton rel = build_relaxed_product(wts, nba);
    out["relaxed_product_states"] = rel.num_states();
    out["relaxed_product_transitions"] = rel.graph().num_finite_edges();
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string nba;
  std::string scenario;
  std::uint64_t seed = 1;
  std::int64_t beta = 10;
  std::string mode = "plain";
  std::string algo = "ltl-dstar";
  std::size_t loops = 1;
  unsigned threads = 1;
  std::string trace_out = "trace";
  bool check_oracle = false;
  bool no_heuristic = false;
  std::string shadow;
};

int cmd_simulate(const SimulateArgs& a) {
  SimulationOptions opts;
  if (a.beta < 1) throw UsageError("--beta must be >= 1");
  opts.beta = a.beta;
  opts.mode = parse_mode(a.mode);
  opts.algorithm = parse_algorithm(a.algo);
  opts.loops = a.loops;
  opts.threads = a.threads;
  opts.check_oracle = a.check_oracle;
  opts.use_heuristic = !a.no_heuristic;
  if (!a.shadow.empty()) opts.shadow = parse_algorithm(a.shadow);
  auto nba = load_nba(a.nba);
  auto env = load_environment(a.scenario, a.seed);
  const TraceReport report = simulate(*env, nba, opts);
  write_file(a.trace_out + ".csv", trace_to_csv(report));
  write_file(a.trace_out + ".json", trace_to_json(report));
  spdlog::info("{} replans, {} moves, {} loops completed", report.num_replans(),
               report.trajectory.size() - 1, report.loops_completed);
  if (report.halted) {
    std::cerr << "no accepting run\n";
    return kExitNoRun;
  }
  return kExitOk;
}

int cmd_bench(const std::string& config_path, unsigned workers) {
  BenchConfig config = parse_bench_config(read_file(config_path));
  if (workers > 0) config.workers = workers;
  const auto rows = run_bench(config);
  write_file(config.output, bench_to_csv(rows));
  write_file(config.summary, bench_summary_csv(rows));
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status.rfind("error", 0) == 0;
  spdlog::info("{} rows written to {} ({} failed)", rows.size(), config.output, failed);
  return kExitOk;
}

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_logger_mt("ltldstar"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("LTLDSTAR_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"LTL-D* incremental temporal-logic motion planner"};
  app.require_subcommand(1);

  std::string nba_path, scenario;
  bool relaxed = false;
  auto* build = app.add_subcommand("build", "Print automaton and product sizes as JSON");
  build->add_option("--nba", nba_path, "HOA automaton (default: built-in A-B-C-D patrol)");
  build->add_option("--scenario", scenario, "Scenario file or random:N[:density]")->required();
  build->add_flag("--relaxed", relaxed, "Also report the relaxed product");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one simulation and write CSV and JSON traces");
  simulate_cmd->add_option("--nba", sim.nba, "HOA automaton (default: built-in A-B-C-D patrol)");
  simulate_cmd->add_option("--scenario", sim.scenario, "Scenario file or random:N[:density]")->required();
  simulate_cmd->add_option("--seed", sim.seed, "Seed for random scenarios");
  simulate_cmd->add_option("--beta", sim.beta, "Suffix weight");
  simulate_cmd->add_option("--mode", sim.mode, "plain | relaxed | auto");
  simulate_cmd->add_option("--algo", sim.algo, "ltl-dstar | iterative | local-revision");
  simulate_cmd->add_option("--loops", sim.loops, "Suffix traversals to complete");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads for suffix searches");
  simulate_cmd->add_option("--trace-out", sim.trace_out, "Output prefix for .csv and .json");
  simulate_cmd->add_flag("--check-oracle", sim.check_oracle, "Record the Dijkstra oracle total per event");
  simulate_cmd->add_flag("--no-heuristic", sim.no_heuristic, "Disable the grid heuristic");
  simulate_cmd->add_option("--shadow", sim.shadow,
                           "Also record another algorithm's plan total from the same states");

  std::string config_path;
  unsigned workers = 0;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("--config", config_path, "JSON bench config")->required();
  bench->add_option("--workers", workers, "Parallel workers (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(nba_path, scenario, relaxed);
    if (*simulate_cmd) return cmd_simulate(sim);
    return cmd_bench(config_path, workers);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoAcceptingRun& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
