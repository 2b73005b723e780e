#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "ltldstar/baselines.hpp"
#include "ltldstar/errors.hpp"
#include "ltldstar/planner.hpp"
#include "ltldstar/world.hpp"

namespace py = pybind11;
using namespace ltldstar;

namespace {

using NbaPtr = std::shared_ptr<Nba>;

std::unique_ptr<Environment> environment(const std::string& scenario_json) {
  if (nlohmann::json::parse(scenario_json).contains("states")) {
    return std::make_unique<WaypointEnvironment>(scenario_json);
  }
  return std::make_unique<GridEnvironment>(parse_scenario(scenario_json));
}

py::object weight(const Weight& w) {
  if (w.is_infinite()) return py::none();
  return py::make_tuple(w.violation(), w.travel());
}

ProductMode product_mode(bool relaxed) { return relaxed ? ProductMode::kRelaxed : ProductMode::kPlain; }

py::object json_to_python(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_ltldstar, m) {
  m.doc() = "Incremental LTL motion planning with lexicographic (violation, travel) costs.";

  auto usage = py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UnsupportedFeature>(m, "UnsupportedFeature", PyExc_ValueError);
  py::register_exception<NoAcceptingRun>(m, "NoAcceptingRun", PyExc_RuntimeError);
  py::register_exception<UnknownEdge>(m, "UnknownEdge", PyExc_KeyError);
  (void)usage;

  py::class_<Nba, NbaPtr>(m, "Nba")
      .def_property_readonly("num_states", &Nba::num_states)
      .def_property_readonly("num_transitions", [](const Nba& n) { return n.transitions().size(); })
      .def_property_readonly("ap", [](const Nba& n) { return n.ap()->names(); })
      .def_property_readonly("initial", &Nba::initial)
      .def_property_readonly("accepting",
                             [](const Nba& n) {
                               std::vector<std::size_t> out;
                               for (std::size_t q = 0; q < n.num_states(); ++q) {
                                 if (n.is_accepting(q)) out.push_back(q);
                               }
                               return out;
                             })
      .def("to_hoa", [](const Nba& n, const std::string& name) { return to_hoa(n, name); }, py::arg("name") = "");

  m.def("parse_nba", [](const std::string& text) { return std::make_shared<Nba>(parse_nba(text)); },
        py::arg("text"), "Parse a state-based Buchi automaton in HOA format.");
  m.def("sequencing_nba",
        [](const std::vector<std::string>& regions) { return std::make_shared<Nba>(sequencing_nba(regions)); },
        py::arg("regions"), "Automaton visiting the regions in order, forever.");

  m.def("random_map",
        [](std::uint64_t seed, int n, double density, bool allow_infeasible) {
          return scenario_to_json(random_map(seed, n, density, allow_infeasible));
        },
        py::arg("seed"), py::arg("n"), py::arg("density") = 0.4, py::arg("allow_infeasible") = false,
        "Scenario JSON of a seeded random grid map.");
  m.def("benchmark_map",
        [](int n, const std::string& variant) {
          if (variant == "a") return scenario_to_json(benchmark_map(n, MapVariant::kA));
          if (variant == "b") return scenario_to_json(benchmark_map(n, MapVariant::kB));
          if (variant == "blocked-c") return scenario_to_json(benchmark_map(n, MapVariant::kBlockedC));
          throw UsageError("unknown benchmark map '" + variant + "' (a, b, blocked-c)");
        },
        py::arg("n"), py::arg("variant"), "Scenario JSON of a benchmark map: 'a', 'b' or 'blocked-c'.");

  m.def("build",
        [](const NbaPtr& nba, const std::string& scenario, bool relaxed) {
          const auto env = environment(scenario);
          const Wts wts = env->initial_wts(nba->ap());
          const auto pa = build(wts, nba, product_mode(relaxed));
          py::dict out;
          out["wts_states"] = wts.num_states();
          out["product_states"] = pa.num_states();
          out["product_transitions"] = pa.graph().num_edges();
          out["accepting_states"] = pa.accepting_states().size();
          return out;
        },
        py::arg("nba"), py::arg("scenario"), py::arg("relaxed") = false,
        "Product automaton sizes under the robot's initial knowledge.");

  m.def("plan",
        [](const NbaPtr& nba, const std::string& scenario, bool relaxed, std::int64_t beta, bool omniscient) {
          const auto env = environment(scenario);
          const Wts wts = omniscient ? env->full_wts(nba->ap()) : env->initial_wts(nba->ap());
          PlannerOptions opts;
          opts.beta = beta;
          opts.wts_heuristic = env->heuristic();
          Planner planner(build(wts, nba, product_mode(relaxed)), opts);
          const Run run = planner.plan_initial(planner.pa().initial_states_at(env->start()));
          auto names = [&](const std::vector<StateId>& path) {
            std::vector<std::string> out;
            for (StateId s : path) out.push_back(env->describe(planner.pa().wts_state(s)));
            return out;
          };
          py::dict out;
          out["total"] = weight(run.total);
          out["prefix_cost"] = weight(run.prefix_cost);
          out["suffix_cost"] = weight(run.suffix_cost);
          out["prefix"] = names(run.prefix);
          out["suffix"] = names(run.suffix);
          return out;
        },
        py::arg("nba"), py::arg("scenario"), py::arg("relaxed") = false, py::arg("beta") = 10,
        py::arg("omniscient") = true, "Optimal prefix-suffix run; raises NoAcceptingRun when none exists.");

  m.def("oracle",
        [](const NbaPtr& nba, const std::string& scenario, bool relaxed, std::int64_t beta, bool omniscient) {
          const auto env = environment(scenario);
          const Wts wts = omniscient ? env->full_wts(nba->ap()) : env->initial_wts(nba->ap());
          const auto pa = build(wts, nba, product_mode(relaxed));
          return weight(dijkstra_oracle(pa, pa.initial_states_at(env->start()), beta).best_total);
        },
        py::arg("nba"), py::arg("scenario"), py::arg("relaxed") = false, py::arg("beta") = 10,
        py::arg("omniscient") = true, "Best total by exhaustive Dijkstra, or None when no accepting run exists.");

  m.def("simulate",
        [](const NbaPtr& nba, const std::string& scenario, const std::string& algorithm, const std::string& mode,
           std::int64_t beta, std::size_t loops, bool check_oracle) {
          const auto env = environment(scenario);
          SimulationOptions opts;
          opts.algorithm = parse_algorithm(algorithm);
          opts.mode = parse_mode(mode);
          opts.beta = beta;
          opts.loops = loops;
          opts.check_oracle = check_oracle;
          std::string text;
          {
            py::gil_scoped_release release;
            text = trace_to_json(simulate(*env, nba, opts));
          }
          return json_to_python(text);
        },
        py::arg("nba"), py::arg("scenario"), py::arg("algorithm") = "ltl-dstar", py::arg("mode") = "plain",
        py::arg("beta") = 10, py::arg("loops") = 1, py::arg("check_oracle") = false,
        "Sense-replan-move simulation; returns the trace as a dict.");
}
