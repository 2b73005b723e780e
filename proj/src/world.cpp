#include "ltldstar/world.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ltldstar/errors.hpp"

namespace ltldstar {
namespace {

using nlohmann::json;

constexpr Cell kSteps[4] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};  // N, E, S, W

Cell offset(Cell c, Cell d) { return {c.row + d.row, c.col + d.col}; }

bool adjacent(Cell a, Cell b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1; }

std::pair<Cell, Cell> wall_key(Cell a, Cell b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

Cell cell_from(const json& v) {
  if (!v.is_array() || v.size() != 2) throw UsageError("cell must be [row, col]");
  return {v[0].get<int>(), v[1].get<int>()};
}

json cell_to(Cell c) { return json::array({c.row, c.col}); }

std::vector<Cell> cells_from(const json& doc, const char* key) {
  std::vector<Cell> out;
  if (!doc.contains(key)) return out;
  for (const auto& v : doc.at(key)) out.push_back(cell_from(v));
  return out;
}

class WallSet {
 public:
  explicit WallSet(const GridScenario& s) {
    for (const auto& [a, b] : s.walls) walls_.insert(wall_key(a, b));
  }
  bool blocked(Cell a, Cell b) const { return walls_.count(wall_key(a, b)) != 0; }

 private:
  std::set<std::pair<Cell, Cell>> walls_;
};

std::int64_t cost_into(const GridScenario& s, const Belief& belief, std::size_t cell) {
  return belief.at(cell) == Belief::Object::kBump ? s.bump_cost : s.move_cost;
}

}  // namespace

// --- scenario ---------------------------------------------------------------

void GridScenario::validate() const {
  if (width < 1 || height < 1) throw UsageError("grid dimensions must be positive");
  if (move_cost < 1 || bump_cost < 1) throw UsageError("costs must be positive");
  auto check = [&](Cell c, const char* what) {
    if (!in_bounds(c)) {
      throw UsageError(std::string(what) + " cell [" + std::to_string(c.row) + "," +
                       std::to_string(c.col) + "] out of bounds");
    }
  };
  check(start, "start");
  for (const auto& [a, b] : walls) {
    check(a, "wall");
    check(b, "wall");
    if (!adjacent(a, b)) throw UsageError("wall must separate adjacent cells");
  }
  std::set<Cell> obst(obstacles.begin(), obstacles.end());
  for (auto c : obstacles) check(c, "obstacle");
  for (auto c : bumps) {
    check(c, "bump");
    if (obst.count(c)) throw UsageError("cell is both obstacle and bump");
  }
  if (obst.count(start)) throw UsageError("start cell is an obstacle");
  for (const auto& [name, cells] : regions) {
    if (name.empty()) throw UsageError("empty region name");
    for (auto c : cells) {
      check(c, "region");
      if (obst.count(c)) throw UsageError("region '" + name + "' overlaps an obstacle");
    }
  }
}

GridScenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  GridScenario s;
  try {
    s.width = doc.at("width").get<int>();
    s.height = doc.at("height").get<int>();
    if (doc.contains("walls")) {
      for (const auto& w : doc.at("walls")) {
        if (!w.is_array() || w.size() != 2) throw UsageError("wall must be [cell, cell]");
        s.walls.emplace_back(cell_from(w[0]), cell_from(w[1]));
      }
    }
    s.obstacles = cells_from(doc, "obstacles");
    s.bumps = cells_from(doc, "bumps");
    if (doc.contains("regions")) {
      for (const auto& [name, cells] : doc.at("regions").items()) {
        auto& out = s.regions[name];
        for (const auto& v : cells) out.push_back(cell_from(v));
      }
    }
    s.start = cell_from(doc.at("start"));
    s.move_cost = doc.value("move_cost", std::int64_t{10});
    s.bump_cost = doc.value("bump_cost", std::int64_t{50});
  } catch (const json::exception& e) {
    throw UsageError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

std::string scenario_to_json(const GridScenario& s) {
  json doc;
  doc["width"] = s.width;
  doc["height"] = s.height;
  doc["walls"] = json::array();
  for (const auto& [a, b] : s.walls) doc["walls"].push_back(json::array({cell_to(a), cell_to(b)}));
  doc["obstacles"] = json::array();
  for (auto c : s.obstacles) doc["obstacles"].push_back(cell_to(c));
  doc["bumps"] = json::array();
  for (auto c : s.bumps) doc["bumps"].push_back(cell_to(c));
  doc["regions"] = json::object();
  for (const auto& [name, cells] : s.regions) {
    auto& arr = doc["regions"][name] = json::array();
    for (auto c : cells) arr.push_back(cell_to(c));
  }
  doc["start"] = cell_to(s.start);
  doc["move_cost"] = s.move_cost;
  doc["bump_cost"] = s.bump_cost;
  return doc.dump(1) + "\n";
}

// --- belief, WTS, sensing ---------------------------------------------------

Belief Belief::omniscient(const GridScenario& s) {
  Belief b(s.num_cells());
  for (auto c : s.obstacles) b.set(s.index(c), Object::kObstacle);
  for (auto c : s.bumps) b.set(s.index(c), Object::kBump);
  return b;
}

std::size_t Belief::num_known() const {
  return static_cast<std::size_t>(
      std::count_if(known_.begin(), known_.end(), [](Object o) { return o != Object::kNone; }));
}

Wts to_wts(const GridScenario& s, const Belief& belief, SharedUniverse ap) {
  s.validate();
  if (!ap) throw UsageError("null proposition universe");
  std::vector<std::uint64_t> labels(s.num_cells(), 0);
  for (std::size_t i = 0; i < ap->size(); ++i) {
    auto it = s.regions.find(ap->name(i));
    if (it == s.regions.end()) {
      throw UsageError("proposition '" + ap->name(i) + "' is not a region of the scenario");
    }
    for (auto c : it->second) labels[s.index(c)] |= std::uint64_t{1} << i;
  }
  std::vector<std::string> names;
  names.reserve(s.num_cells());
  for (std::size_t i = 0; i < s.num_cells(); ++i) {
    const Cell c = s.cell(i);
    names.push_back(std::to_string(c.row) + "," + std::to_string(c.col));
  }
  Wts wts(std::move(ap), std::move(labels), {s.index(s.start)}, std::move(names));
  const WallSet walls(s);
  for (std::size_t i = 0; i < s.num_cells(); ++i) {
    const Cell c = s.cell(i);
    for (auto d : kSteps) {
      const Cell n = offset(c, d);
      if (!s.in_bounds(n) || walls.blocked(c, n)) continue;
      const auto j = s.index(n);
      if (belief.at(j) == Belief::Object::kObstacle) continue;
      wts.add_edge(i, j, cost_into(s, belief, j));
    }
  }
  return wts;
}

std::vector<WtsChange> sense(const GridScenario& s, Belief& belief, Cell position) {
  if (!s.in_bounds(position)) throw UsageError("position out of bounds");
  std::set<Cell> obst(s.obstacles.begin(), s.obstacles.end());
  std::set<Cell> bumps(s.bumps.begin(), s.bumps.end());
  const WallSet walls(s);
  std::vector<WtsChange> out;
  for (auto d : kSteps) {
    const Cell c = offset(position, d);
    if (!s.in_bounds(c)) continue;
    const auto ci = s.index(c);
    if (belief.at(ci) != Belief::Object::kNone) continue;
    const bool is_obstacle = obst.count(c) != 0;
    if (!is_obstacle && !bumps.count(c)) continue;
    belief.set(ci, is_obstacle ? Belief::Object::kObstacle : Belief::Object::kBump);
    for (auto e : kSteps) {
      const Cell m = offset(c, e);
      if (!s.in_bounds(m) || walls.blocked(m, c)) continue;
      if (is_obstacle) {
        out.push_back({WtsChange::Kind::kDelete, s.index(m), ci, 0});
      } else {
        out.push_back({WtsChange::Kind::kReweight, s.index(m), ci, s.bump_cost});
      }
    }
  }
  return out;
}

std::function<std::int64_t(std::size_t, std::size_t)> grid_heuristic(const GridScenario& s) {
  const std::int64_t unit = std::min(s.move_cost, s.bump_cost);
  const auto width = static_cast<std::size_t>(s.width);
  return [unit, width](std::size_t a, std::size_t b) {
    const auto ar = static_cast<std::int64_t>(a / width), ac = static_cast<std::int64_t>(a % width);
    const auto br = static_cast<std::int64_t>(b / width), bc = static_cast<std::int64_t>(b % width);
    return unit * (std::abs(ar - br) + std::abs(ac - bc));
  };
}

// --- maps ---------------------------------------------------------------------

namespace {

const std::vector<std::string> kSequence{"A", "B", "C", "D"};

/// Accepting states that lie on a cycle of finite edges (Kosaraju SCCs).
std::vector<bool> accepting_on_cycle(const Digraph& g, const ProductAutomaton& pa) {
  const std::size_t n = g.num_nodes();
  std::vector<StateId> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  std::vector<std::pair<StateId, std::size_t>> stack;
  for (StateId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      const auto out = g.out(v);
      if (i == out.size()) {
        order.push_back(v);
        stack.pop_back();
        continue;
      }
      const Edge& e = g.edge(out[i++]);
      if (e.weight.is_finite() && !seen[e.to]) {
        seen[e.to] = true;
        stack.push_back({e.to, 0});
      }
    }
  }
  std::vector<std::size_t> comp(n, n), comp_size;
  std::vector<StateId> frontier;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != n) continue;
    const std::size_t c = comp_size.size();
    comp_size.push_back(0);
    comp[*it] = c;
    frontier.assign(1, *it);
    while (!frontier.empty()) {
      const StateId v = frontier.back();
      frontier.pop_back();
      ++comp_size[c];
      for (EdgeId id : g.in(v)) {
        const Edge& e = g.edge(id);
        if (e.weight.is_finite() && comp[e.from] == n) {
          comp[e.from] = c;
          frontier.push_back(e.from);
        }
      }
    }
  }
  std::vector<bool> good(n, false);
  for (StateId a : pa.accepting_states()) {
    bool cyclic = comp_size[comp[a]] > 1;
    for (EdgeId id : g.out(a)) cyclic = cyclic || (g.edge(id).to == a && g.edge(id).weight.is_finite());
    good[a] = cyclic;
  }
  return good;
}

/// True when, under full knowledge, every product state reachable from the
/// start can still reach an accepting cycle. The robot only moves along real
/// edges, so no partial-knowledge detour can strand it.
bool plain_feasible(const GridScenario& s) {
  auto nba = std::make_shared<const Nba>(sequencing_nba(kSequence));
  const auto pa = build_product(to_wts(s, Belief::omniscient(s), nba->ap()), nba);
  const Digraph& g = pa.graph();
  std::vector<bool> live = accepting_on_cycle(g, pa);
  std::vector<StateId> frontier;
  for (StateId v = 0; v < g.num_nodes(); ++v) {
    if (live[v]) frontier.push_back(v);
  }
  while (!frontier.empty()) {
    const StateId v = frontier.back();
    frontier.pop_back();
    for (EdgeId id : g.in(v)) {
      const Edge& e = g.edge(id);
      if (e.weight.is_finite() && !live[e.from]) {
        live[e.from] = true;
        frontier.push_back(e.from);
      }
    }
  }
  std::vector<bool> seen(g.num_nodes(), false);
  frontier = pa.initial_states_at(s.index(s.start));
  for (StateId v : frontier) seen[v] = true;
  while (!frontier.empty()) {
    const StateId v = frontier.back();
    frontier.pop_back();
    if (!live[v]) return false;
    for (EdgeId id : g.out(v)) {
      const Edge& e = g.edge(id);
      if (e.weight.is_finite() && !seen[e.to]) {
        seen[e.to] = true;
        frontier.push_back(e.to);
      }
    }
  }
  return true;
}

/// Ring road (border), centre cross (row/col n/2) or neither.
bool on_road(int n, Cell c) {
  const int h = n / 2;
  return c.row == 0 || c.col == 0 || c.row == n - 1 || c.col == n - 1 || c.row == h || c.col == h;
}

/// Quadrant of a non-road cell: 0 top-left, 1 top-right, 2 bottom-right, 3 bottom-left.
int quadrant(int n, Cell c) {
  const int h = n / 2;
  if (c.row < h) return c.col < h ? 0 : 1;
  return c.col < h ? 3 : 2;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

GridScenario random_map(std::uint64_t seed, int n, double density, bool allow_infeasible,
                        int max_retries) {
  if (n < 4) throw UsageError("map size must be at least 4");
  if (!(density >= 0.0 && density < 1.0)) throw UsageError("density must be in [0, 1)");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    GridScenario s;
    s.width = s.height = n;
    s.start = {n / 2, n / 2};
    std::vector<std::vector<Cell>> interior(4);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (!on_road(n, {r, c})) interior[quadrant(n, {r, c})].push_back({r, c});
      }
    }
    std::set<Cell> regions;
    for (int q = 0; q < 4; ++q) {
      if (interior[q].empty()) throw UsageError("map too small for quadrant interiors");
      const Cell c = interior[q][draw(rng, interior[q].size())];
      s.regions[kSequence[q]] = {c};
      regions.insert(c);
    }
    for (int q = 0; q < 4; ++q) {
      for (auto c : interior[q]) {
        if (regions.count(c)) continue;
        if (unit(rng) < density) {
          s.obstacles.push_back(c);
        } else if (unit(rng) < 0.1) {
          s.bumps.push_back(c);
        }
      }
    }
    if (allow_infeasible || plain_feasible(s)) return s;
  }
  throw UsageError("random_map: no feasible map after " + std::to_string(max_retries) + " retries");
}

GridScenario benchmark_map(int n, MapVariant variant) {
  if (n < 10 || n % 2 != 0) throw UsageError("benchmark maps need an even size >= 10");
  const int h = n / 2;
  GridScenario s;
  s.width = s.height = n;
  s.start = {h, h};

  // Quadrant interiors: rows/cols [lo, hi] inside the ring and the cross.
  struct Box {
    int r0, r1, c0, c1;
  };
  const Box boxes[4] = {{1, h - 1, 1, h - 1}, {1, h - 1, h + 1, n - 2}, {h + 1, n - 2, h + 1, n - 2},
                        {h + 1, n - 2, 1, h - 1}};
  // Walls around a box except at door crossings (inside cell, outside cell).
  auto fence = [&](const Box& b, const std::set<std::pair<Cell, Cell>>& doors) {
    for (int r = b.r0; r <= b.r1; ++r) {
      for (int c = b.c0; c <= b.c1; ++c) {
        for (auto d : kSteps) {
          const Cell in{r, c}, out = offset(in, d);
          if (out.row >= b.r0 && out.row <= b.r1 && out.col >= b.c0 && out.col <= b.c1) continue;
          if (!doors.count({in, out})) s.walls.emplace_back(in, out);
        }
      }
    }
  };
  for (int q = 0; q < 4; ++q) {
    const Box& b = boxes[q];
    const Cell centre{(b.r0 + b.r1) / 2, (b.c0 + b.c1) / 2};
    s.regions[kSequence[q]] = {centre};
    std::set<std::pair<Cell, Cell>> doors;
    if (q == 2 && variant != MapVariant::kA) {
      doors.insert({{b.r1, b.c1}, {b.r1 + 1, b.c1}});  // bottom-right corner onto the ring
    } else {
      // One door onto the cross and one onto the ring, mid-side.
      if (q < 2) {
        doors.insert({{b.r1, centre.col}, {b.r1 + 1, centre.col}});
      } else {
        doors.insert({{b.r0, centre.col}, {b.r0 - 1, centre.col}});
      }
      if (q == 0 || q == 3) {
        doors.insert({{centre.row, b.c0}, {centre.row, b.c0 - 1}});
      } else {
        doors.insert({{centre.row, b.c1}, {centre.row, b.c1 + 1}});
      }
    }
    fence(b, doors);
  }

  // Hidden objects on the roads: one obstacle on each arm of the cross except
  // the one leading to C, bumps on the ring.
  s.obstacles.push_back({h, h / 2});          // west arm
  s.obstacles.push_back({h / 2, h});          // north arm
  s.obstacles.push_back({h + (n - h) / 2, h});  // south arm
  s.bumps.push_back({0, h / 2});
  s.bumps.push_back({n - 1, h / 2});
  s.bumps.push_back({h / 2, n - 1});
  if (variant == MapVariant::kBlockedC) s.obstacles.push_back({boxes[2].r1, boxes[2].c1});
  s.validate();
  return s;
}

// --- environments ---------------------------------------------------------------

GridEnvironment::GridEnvironment(GridScenario scenario)
    : scenario_(std::move(scenario)), belief_(scenario_.num_cells()) {
  scenario_.validate();
}

Wts GridEnvironment::initial_wts(const SharedUniverse& ap) const {
  return to_wts(scenario_, Belief(scenario_.num_cells()), ap);
}

std::size_t GridEnvironment::start() const { return scenario_.index(scenario_.start); }

std::vector<WtsChange> GridEnvironment::sense(std::size_t position) {
  return ltldstar::sense(scenario_, belief_, scenario_.cell(position));
}

std::function<std::int64_t(std::size_t, std::size_t)> GridEnvironment::heuristic() const {
  return grid_heuristic(scenario_);
}

std::string GridEnvironment::describe(std::size_t state) const {
  const Cell c = scenario_.cell(state);
  return "[" + std::to_string(c.row) + "," + std::to_string(c.col) + "]";
}

Wts GridEnvironment::full_wts(const SharedUniverse& ap) const {
  return to_wts(scenario_, Belief::omniscient(scenario_), ap);
}

WaypointEnvironment::WaypointEnvironment(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    ap_ = std::make_shared<const APUniverse>(doc.at("ap").get<std::vector<std::string>>());
    wts_.emplace(load_wts_json(json_text, ap_));
    if (wts_->initial().size() != 1) throw UsageError("waypoint scenario needs exactly one init state");
    auto lookup = [&](const json& v) {
      const std::string id = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
      auto s = wts_->state_named(id);
      if (!s) throw UsageError("unknown waypoint '" + id + "'");
      return *s;
    };
    if (doc.contains("hidden")) {
      for (const auto& h : doc.at("hidden")) {
        const auto kind = h.at("kind").get<std::string>();
        WtsChange c{WtsChange::Kind::kDelete, lookup(h.at("from")), lookup(h.at("to")), 0};
        if (kind == "reweight") {
          c.kind = WtsChange::Kind::kReweight;
          c.weight = h.at("weight").get<std::int64_t>();
        } else if (kind != "delete") {
          throw UsageError("hidden change kind must be delete or reweight");
        }
        if (!wts_->find_edge(c.from, c.to)) throw UsageError("hidden change on a missing transition");
        hidden_.push_back(c);
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("waypoint scenario: ") + e.what());
  }
  revealed_.assign(hidden_.size(), false);
}

Wts WaypointEnvironment::initial_wts(const SharedUniverse& ap) const {
  if (!(*ap == *ap_)) throw UsageError("NBA propositions differ from the waypoint scenario's");
  return *wts_;
}

std::size_t WaypointEnvironment::start() const { return wts_->initial().front(); }

std::vector<WtsChange> WaypointEnvironment::sense(std::size_t position) {
  std::vector<WtsChange> out;
  for (std::size_t i = 0; i < hidden_.size(); ++i) {
    if (revealed_[i] || hidden_[i].from != position) continue;
    revealed_[i] = true;
    out.push_back(hidden_[i]);
  }
  return out;
}

Wts WaypointEnvironment::full_wts(const SharedUniverse& ap) const {
  Wts w = initial_wts(ap);
  for (const auto& c : hidden_) {
    w.set_weight(*w.find_edge(c.from, c.to), c.kind == WtsChange::Kind::kDelete ? Weight::kInf : c.weight);
  }
  return w;
}

// --- simulation -----------------------------------------------------------------

std::string_view to_string(ModeSelect m) {
  switch (m) {
    case ModeSelect::kPlain:
      return "plain";
    case ModeSelect::kRelaxed:
      return "relaxed";
    case ModeSelect::kAuto:
      return "auto";
  }
  return "?";
}

ModeSelect parse_mode(std::string_view name) {
  for (auto m : {ModeSelect::kPlain, ModeSelect::kRelaxed, ModeSelect::kAuto}) {
    if (name == to_string(m)) return m;
  }
  throw UsageError("unknown mode '" + std::string(name) + "'");
}

TraceReport simulate(Environment& env, std::shared_ptr<const Nba> nba, const SimulationOptions& options) {
  if (!nba) throw UsageError("null NBA");
  if (options.beta < 1) throw UsageError("beta must be >= 1");
  if (options.loops < 1) throw UsageError("loops must be >= 1");
  const ProductMode mode = options.mode == ModeSelect::kPlain ? ProductMode::kPlain : ProductMode::kRelaxed;

  const Wts wts = env.initial_wts(nba->ap());
  if (env.start() >= wts.num_states()) throw UsageError("start cell is not a WTS state");
  ProductAutomaton pa = build(wts, nba, mode);

  PlannerOptions popts;
  popts.beta = options.beta;
  popts.threads = options.threads;
  if (options.use_heuristic) popts.wts_heuristic = env.heuristic();

  // Shadow products kept in sync for the oracle and the auto-mode check.
  std::optional<ProductAutomaton> oracle_pa;
  if (options.check_oracle) oracle_pa.emplace(pa);
  std::optional<ProductAutomaton> plain_pa;
  if (options.mode == ModeSelect::kAuto) plain_pa.emplace(build_product(wts, nba));

  TraceReport report;
  report.algorithm = options.algorithm;
  report.mode = mode;
  report.beta = options.beta;
  report.num_product_states = pa.num_states();
  report.trajectory.push_back(env.start());

  const std::vector<StateId> starts = pa.initial_states_at(env.start());
  std::unique_ptr<Replanner> shadow;
  if (options.shadow) shadow = make_replanner(*options.shadow, pa, popts);
  auto shadow_plan = [&](auto&& call) -> Weight {
    try {
      return call().total;
    } catch (const NoAcceptingRun&) {
      return Weight::infinity();
    }
  };
  auto replanner = make_replanner(options.algorithm, std::move(pa), popts);
  const ProductAutomaton& live = replanner->pa();

  auto after_plan = [&](ReplanRecord& rec, std::span<const StateId> from) {
    if (oracle_pa) rec.oracle_total = dijkstra_oracle(*oracle_pa, from, options.beta).best_total;
    if (plain_pa && rec.total.violation() > 0 &&
        dijkstra_oracle(*plain_pa, from, options.beta).best_total.is_finite()) {
      throw std::logic_error("auto mode: violating run returned although the task is feasible");
    }
  };

  using Clock = std::chrono::steady_clock;
  {
    ReplanRecord rec;
    const auto t0 = Clock::now();
    try {
      rec.total = replanner->plan_initial(starts).total;
    } catch (const NoAcceptingRun&) {
      rec.total = Weight::infinity();
      report.halted = true;
    }
    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
    rec.expansions = replanner->last_expansions();
    if (!report.halted) after_plan(rec, starts);
    else if (oracle_pa) rec.oracle_total = dijkstra_oracle(*oracle_pa, starts, options.beta).best_total;
    if (shadow) rec.shadow_total = shadow_plan([&] { return shadow->plan_initial(starts); });
    report.records.push_back(rec);
  }
  if (report.halted) return report;

  const std::size_t max_steps =
      options.max_steps ? options.max_steps : 4 * (options.loops + 1) * live.num_states() + 100;
  bool entered_accepting = live.is_accepting(replanner->current_state());
  std::size_t steps = 0;
  for (;;) {
    const StateId current = replanner->current_state();
    auto changes = env.sense(live.wts_state(current));
    if (!changes.empty()) {
      ReplanRecord rec;
      rec.event = report.records.size();
      rec.step = steps;
      rec.phase = replanner->phase();
      for (const auto& c : changes) {
        if (auto we = live.wts().find_edge(c.from, c.to)) rec.mod_size += live.edges_of_wts_edge(*we).size();
      }
      const auto t0 = Clock::now();
      try {
        rec.total = replanner->replan(changes, current).total;
      } catch (const NoAcceptingRun&) {
        rec.total = Weight::infinity();
        report.halted = true;
      }
      rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
      rec.expansions = replanner->last_expansions();
      for (auto* shadow : {oracle_pa ? &*oracle_pa : nullptr, plain_pa ? &*plain_pa : nullptr}) {
        if (!shadow) continue;
        for (const auto& c : changes) shadow->apply(c);
      }
      if (shadow) rec.shadow_total = shadow_plan([&] { return shadow->replan(changes, current); });
      const StateId from[] = {current};
      if (!report.halted) after_plan(rec, from);
      else if (oracle_pa) rec.oracle_total = dijkstra_oracle(*oracle_pa, from, options.beta).best_total;
      report.records.push_back(rec);
      if (report.halted) break;
    }

    if (++steps > max_steps) throw std::runtime_error("simulation exceeded the step limit");
    const StateId next = replanner->next_state();
    const StateId pair[] = {current, next};
    const Weight w = path_weight(live.graph(), pair);
    if (w.is_infinite()) throw std::logic_error("planned move along a missing transition");
    report.traversed += w;
    replanner->advance();
    report.trajectory.push_back(live.wts_state(next));
    if (live.is_accepting(next)) {
      if (entered_accepting) ++report.loops_completed;
      entered_accepting = true;
    }
    if (report.loops_completed >= options.loops) break;
  }
  report.fallbacks = replanner->fallbacks();
  return report;
}

// --- reports --------------------------------------------------------------------

namespace {

std::string phase_name(Phase p) { return p == Phase::kPrefix ? "prefix" : "suffix"; }

std::string component(std::int64_t v) { return v == Weight::kInf ? "inf" : std::to_string(v); }

json weight_json(Weight w) {
  if (w.is_infinite()) return nullptr;
  return json::array({w.violation(), w.travel()});
}

}  // namespace

std::string trace_csv_header() {
  return "event,phase,mod_size,wall_ns,expansions,total_violation,total_travel\n";
}

std::string trace_to_csv(const TraceReport& report) {
  std::ostringstream os;
  os << trace_csv_header();
  for (const auto& r : report.records) {
    os << r.event << ',' << phase_name(r.phase) << ',' << r.mod_size << ',' << r.wall_ns << ','
       << r.expansions << ',' << component(r.total.violation()) << ',' << component(r.total.travel())
       << '\n';
  }
  return os.str();
}

std::string trace_to_json(const TraceReport& report) {
  json doc;
  doc["algorithm"] = std::string(to_string(report.algorithm));
  doc["mode"] = report.mode == ProductMode::kPlain ? "plain" : "relaxed";
  doc["beta"] = report.beta;
  doc["product_states"] = report.num_product_states;
  doc["halted"] = report.halted;
  doc["loops_completed"] = report.loops_completed;
  doc["replans"] = report.num_replans();
  doc["fallbacks"] = report.fallbacks;
  doc["traversed"] = weight_json(report.traversed);
  doc["trajectory"] = report.trajectory;
  doc["events"] = json::array();
  for (const auto& r : report.records) {
    json e;
    e["event"] = r.event;
    e["step"] = r.step;
    e["phase"] = phase_name(r.phase);
    e["mod_size"] = r.mod_size;
    e["wall_ns"] = r.wall_ns;
    e["expansions"] = r.expansions;
    e["total"] = weight_json(r.total);
    if (r.oracle_total) e["oracle_total"] = weight_json(*r.oracle_total);
    if (r.shadow_total) e["shadow_total"] = weight_json(*r.shadow_total);
    doc["events"].push_back(std::move(e));
  }
  return doc.dump(1) + "\n";
}

}  // namespace ltldstar
