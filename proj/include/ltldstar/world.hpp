#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltldstar/baselines.hpp"
#include "ltldstar/nba.hpp"
#include "ltldstar/planner.hpp"
#include "ltldstar/product.hpp"
#include "ltldstar/replanner.hpp"
#include "ltldstar/wts.hpp"

namespace ltldstar {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

/// N-by-M gridworld with known walls and hidden obstacles and bumps.
struct GridScenario {
  int width = 0;
  int height = 0;
  std::vector<std::pair<Cell, Cell>> walls;  // blocked boundaries between adjacent cells
  std::vector<Cell> obstacles;
  std::vector<Cell> bumps;
  std::map<std::string, std::vector<Cell>> regions;
  Cell start;
  std::int64_t move_cost = 10;
  std::int64_t bump_cost = 50;

  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width + c.col; }
  Cell cell(std::size_t index) const {
    return {static_cast<int>(index / width), static_cast<int>(index % width)};
  }
  std::size_t num_cells() const { return static_cast<std::size_t>(width) * height; }
  /// Throws UsageError if an invariant is violated.
  void validate() const;
};

GridScenario parse_scenario(std::string_view json_text);
std::string scenario_to_json(const GridScenario& scenario);

/// What the robot currently knows about hidden objects.
class Belief {
 public:
  enum class Object : std::uint8_t { kNone, kObstacle, kBump };

  Belief() = default;
  explicit Belief(std::size_t cells) : known_(cells, Object::kNone) {}
  /// Everything revealed (full knowledge of the scenario).
  static Belief omniscient(const GridScenario& scenario);

  Object at(std::size_t cell) const { return known_.at(cell); }
  void set(std::size_t cell, Object o) { known_.at(cell) = o; }
  std::size_t num_known() const;

 private:
  std::vector<Object> known_;
};

/// Grid WTS under a belief. Every cell is a state (index row * width + col);
/// edges join 4-neighbours not separated by a wall and never enter a believed
/// obstacle; edges into a believed bump cost bump_cost. Labels come from the
/// regions whose names are in `ap`; every name of `ap` must be a region.
Wts to_wts(const GridScenario& scenario, const Belief& belief, SharedUniverse ap);

/// One-cell horizon: reveals hidden objects in the 4-neighbourhood of
/// `position`, updates the belief and returns the matching WTS changes
/// (deletes into an obstacle, reweights into a bump). Empty if nothing new.
std::vector<WtsChange> sense(const GridScenario& scenario, Belief& belief, Cell position);

/// min edge cost x Manhattan distance between two cells.
std::function<std::int64_t(std::size_t, std::size_t)> grid_heuristic(const GridScenario& scenario);

/// Deterministic random map: ring road and centre cross kept free, obstacles
/// and bumps scattered in the quadrant interiors, one region cell per quadrant
/// (A top-left, B top-right, C bottom-right, D bottom-left). Unless
/// `allow_infeasible`, regenerates until, under full knowledge, every product
/// state of the sequencing task reachable from the start can still reach an
/// accepting cycle (so no partial-knowledge detour can make the task
/// infeasible); throws UsageError after `max_retries`.
GridScenario random_map(std::uint64_t seed, int n, double density, bool allow_infeasible = false,
                        int max_retries = 200);

enum class MapVariant { kA, kB, kBlockedC };

/// Benchmark maps: (a) walled quadrants with several doorways, (b) region C
/// reachable through a single passage at the bottom-right corner, and (b)
/// with that passage hidden-blocked.
GridScenario benchmark_map(int n, MapVariant variant);

/// Environment abstraction driven by the simulator.
class Environment {
 public:
  virtual ~Environment() = default;
  /// WTS under the robot's initial knowledge.
  virtual Wts initial_wts(const SharedUniverse& ap) const = 0;
  virtual std::size_t start() const = 0;
  virtual std::vector<WtsChange> sense(std::size_t position) = 0;
  virtual std::function<std::int64_t(std::size_t, std::size_t)> heuristic() const = 0;
  virtual std::string describe(std::size_t state) const = 0;
  /// WTS with every hidden change applied (for feasibility checks).
  virtual Wts full_wts(const SharedUniverse& ap) const = 0;
};

class GridEnvironment final : public Environment {
 public:
  explicit GridEnvironment(GridScenario scenario);
  Wts initial_wts(const SharedUniverse& ap) const override;
  std::size_t start() const override;
  std::vector<WtsChange> sense(std::size_t position) override;
  std::function<std::int64_t(std::size_t, std::size_t)> heuristic() const override;
  std::string describe(std::size_t state) const override;
  Wts full_wts(const SharedUniverse& ap) const override;
  const GridScenario& scenario() const { return scenario_; }
  const Belief& belief() const { return belief_; }

 private:
  GridScenario scenario_;
  Belief belief_;
};

/// Waypoint graph whose hidden changes are revealed when the robot stands at
/// the source of the affected transition. JSON: the waypoint WTS format plus
///   "ap": [names], "hidden": [{"from":..,"to":..,"kind":"delete"|"reweight","weight":..}]
class WaypointEnvironment final : public Environment {
 public:
  explicit WaypointEnvironment(std::string_view json_text);
  const SharedUniverse& ap() const { return ap_; }
  Wts initial_wts(const SharedUniverse& ap) const override;
  std::size_t start() const override;
  std::vector<WtsChange> sense(std::size_t position) override;
  std::function<std::int64_t(std::size_t, std::size_t)> heuristic() const override { return {}; }
  std::string describe(std::size_t state) const override { return wts_->name(state); }
  Wts full_wts(const SharedUniverse& ap) const override;

 private:
  SharedUniverse ap_;
  std::optional<Wts> wts_;
  std::vector<WtsChange> hidden_;
  std::vector<bool> revealed_;
};

enum class ModeSelect { kPlain, kRelaxed, kAuto };
std::string_view to_string(ModeSelect m);
ModeSelect parse_mode(std::string_view name);

struct SimulationOptions {
  std::int64_t beta = 10;
  ModeSelect mode = ModeSelect::kPlain;
  Algorithm algorithm = Algorithm::kLtlDStar;
  std::size_t loops = 1;  // suffix traversals to complete
  unsigned threads = 1;
  bool use_heuristic = true;
  /// Compare every plan with the Dijkstra oracle (recorded per event).
  bool check_oracle = false;
  /// Second replanner fed the same changes and replanning from the same robot
  /// state; its totals are recorded per event without affecting the robot.
  std::optional<Algorithm> shadow;
  std::size_t max_steps = 0;  // 0: derived from the product size
};

struct ReplanRecord {
  std::size_t event = 0;  // 0 is the initial plan
  std::size_t step = 0;   // robot moves made before this plan
  Phase phase = Phase::kPrefix;
  std::size_t mod_size = 0;
  std::int64_t wall_ns = 0;
  std::size_t expansions = 0;
  Weight total;
  std::optional<Weight> oracle_total;
  std::optional<Weight> shadow_total;
};

struct TraceReport {
  Algorithm algorithm = Algorithm::kLtlDStar;
  ProductMode mode = ProductMode::kPlain;
  std::int64_t beta = 10;
  std::vector<ReplanRecord> records;  // initial plan first
  std::vector<std::size_t> trajectory;  // WTS states visited, start first
  Weight traversed = Weight::zero();    // sum of executed edge weights
  std::size_t loops_completed = 0;
  bool halted = false;  // no accepting run: the robot stays in place
  std::size_t fallbacks = 0;
  std::size_t num_product_states = 0;

  std::size_t num_replans() const { return records.empty() ? 0 : records.size() - 1; }
};

/// Sense, replan (timed), move; until `loops` suffix traversals are complete
/// or no accepting run exists. A loop is complete each time the robot reaches
/// an accepting product state again after entering its first one.
TraceReport simulate(Environment& env, std::shared_ptr<const Nba> nba, const SimulationOptions& options);

std::string trace_csv_header();
std::string trace_to_csv(const TraceReport& report);
std::string trace_to_json(const TraceReport& report);

}  // namespace ltldstar
