#include "ltldstar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ltldstar/errors.hpp"

namespace ltldstar {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridScenario make_map(const BenchConfig& c, int size, std::uint64_t seed) {
  if (c.map == "random") return random_map(seed, size, c.density);
  if (c.map == "a") return benchmark_map(size, MapVariant::kA);
  if (c.map == "b") return benchmark_map(size, MapVariant::kB);
  return benchmark_map(size, MapVariant::kBlockedC);
}

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << v;
  return os.str();
}

std::string component(std::int64_t v) { return v == Weight::kInf ? "inf" : std::to_string(v); }

std::string mode_name(ProductMode m) { return m == ProductMode::kPlain ? "plain" : "relaxed"; }

}  // namespace

void BenchConfig::validate() const {
  if (sizes.empty()) throw UsageError("bench config: no map sizes");
  for (int n : sizes) {
    if (n < 4) throw UsageError("bench config: sizes must be >= 4");
  }
  if (seeds.empty()) throw UsageError("bench config: no seeds");
  if (beta < 1) throw UsageError("bench config: beta must be >= 1");
  if (algorithms.empty()) throw UsageError("bench config: empty algorithm list");
  if (!(density >= 0.0 && density < 1.0)) throw UsageError("bench config: density must be in [0, 1)");
  if (loops < 1) throw UsageError("bench config: loops must be >= 1");
  if (map != "random" && map != "a" && map != "b" && map != "blocked-c") {
    throw UsageError("bench config: map must be random, a, b or blocked-c");
  }
}

BenchConfig parse_bench_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  BenchConfig c;
  try {
    if (doc.contains("sizes")) c.sizes = doc.at("sizes").get<std::vector<int>>();
    if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    c.density = doc.value("density", c.density);
    c.beta = doc.value("beta", c.beta);
    if (doc.contains("mode")) c.mode = parse_mode(doc.at("mode").get<std::string>());
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : doc.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    c.loops = doc.value("loops", c.loops);
    c.map = doc.value("map", c.map);
    c.nba_file = doc.value("nba", c.nba_file);
    c.output = doc.value("output", c.output);
    c.summary = doc.value("summary", c.summary);
    c.workers = doc.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bench config: ") + e.what());
  }
  c.validate();
  return c;
}

std::optional<BoxStats> box_stats(std::vector<double> samples) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  BoxStats b;
  b.q1 = quantile(samples, 0.25);
  b.median = quantile(samples, 0.5);
  b.q3 = quantile(samples, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
  b.lower = *std::find_if(samples.begin(), samples.end(), [&](double v) { return v >= lo_fence; });
  b.upper = *std::find_if(samples.rbegin(), samples.rend(), [&](double v) { return v <= hi_fence; });
  return b;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  config.validate();
  std::shared_ptr<const Nba> nba = std::make_shared<const Nba>(
      config.nba_file.empty() ? sequencing_nba({"A", "B", "C", "D"}) : parse_nba(read_file(config.nba_file)));

  struct Job {
    int size;
    std::uint64_t seed;
    Algorithm algorithm;
  };
  std::vector<Job> jobs;
  for (int size : config.sizes) {
    for (auto seed : config.seeds) {
      for (auto a : config.algorithms) jobs.push_back({size, seed, a});
    }
  }
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      BenchRow& row = rows[i];
      row.size = job.size;
      row.seed = job.seed;
      row.algorithm = job.algorithm;
      row.mode = config.mode == ModeSelect::kPlain ? ProductMode::kPlain : ProductMode::kRelaxed;
      try {
        GridEnvironment env(make_map(config, job.size, job.seed));
        SimulationOptions opts;
        opts.beta = config.beta;
        opts.mode = config.mode;
        opts.algorithm = job.algorithm;
        opts.loops = config.loops;
        const TraceReport report = simulate(env, nba, opts);
        row.status = report.halted ? "halted" : "ok";
        row.replans = report.num_replans();
        row.fallbacks = report.fallbacks;
        row.initial_ns = report.records.front().wall_ns;
        row.final_total = report.records.back().total;
        row.loops_completed = report.loops_completed;
        if (!report.halted) row.loop_cost = report.traversed;
        std::vector<double> samples;
        for (std::size_t r = 1; r < report.records.size(); ++r) {
          row.replan_ns.push_back(report.records[r].wall_ns);
          samples.push_back(static_cast<double>(report.records[r].wall_ns));
        }
        row.time_ns = box_stats(std::move(samples));
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        row.status = "error: " + msg;
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string bench_csv_header() {
  return "size,seed,algorithm,mode,status,replans,fallbacks,time_lower_ns,time_q1_ns,time_median_ns,"
         "time_q3_ns,time_upper_ns,initial_ns,final_violation,final_travel,loop_violation,loop_travel,"
         "loops_completed\n";
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << bench_csv_header();
  for (const auto& r : rows) {
    os << r.size << ',' << r.seed << ',' << to_string(r.algorithm) << ',' << mode_name(r.mode) << ','
       << r.status << ',' << r.replans << ',' << r.fallbacks << ',';
    if (r.time_ns) {
      os << fixed(r.time_ns->lower) << ',' << fixed(r.time_ns->q1) << ',' << fixed(r.time_ns->median) << ','
         << fixed(r.time_ns->q3) << ',' << fixed(r.time_ns->upper) << ',';
    } else {
      os << ",,,,,";
    }
    os << r.initial_ns << ',' << component(r.final_total.violation()) << ','
       << component(r.final_total.travel()) << ',' << component(r.loop_cost.violation()) << ','
       << component(r.loop_cost.travel()) << ',' << r.loops_completed << '\n';
  }
  return os.str();
}

std::string bench_summary_header() {
  return "size,algorithm,runs,replans,median_replan_ns,speedup_vs_iterative,mean_loop_violation,"
         "mean_loop_travel\n";
}

std::string bench_summary_csv(const std::vector<BenchRow>& rows) {
  struct Acc {
    std::size_t runs = 0, completed = 0;
    std::vector<double> samples;
    double violation = 0, travel = 0;
  };
  std::map<int, std::map<Algorithm, Acc>> acc;
  for (const auto& r : rows) {
    auto& a = acc[r.size][r.algorithm];
    ++a.runs;
    for (auto ns : r.replan_ns) a.samples.push_back(static_cast<double>(ns));
    if (r.loop_cost.is_finite()) {
      ++a.completed;
      a.violation += static_cast<double>(r.loop_cost.violation());
      a.travel += static_cast<double>(r.loop_cost.travel());
    }
  }
  std::ostringstream os;
  os << bench_summary_header();
  for (const auto& [size, by_algo] : acc) {
    std::optional<double> iterative;
    if (auto it = by_algo.find(Algorithm::kIterative); it != by_algo.end()) {
      if (auto b = box_stats(it->second.samples)) iterative = b->median;
    }
    for (const auto& [algo, a] : by_algo) {
      const auto b = box_stats(a.samples);
      os << size << ',' << to_string(algo) << ',' << a.runs << ',' << a.samples.size() << ','
         << (b ? fixed(b->median) : "") << ',';
      if (b && iterative && b->median > 0) os << std::setprecision(3) << std::fixed << *iterative / b->median;
      os << ',';
      if (a.completed) {
        os << fixed(a.violation / static_cast<double>(a.completed)) << ','
           << fixed(a.travel / static_cast<double>(a.completed));
      } else {
        os << ',';
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace ltldstar
