#include "ltldstar/replanner.hpp"

#include <string>

#include "ltldstar/baselines.hpp"
#include "ltldstar/errors.hpp"

namespace ltldstar {
namespace {

class LtlDStarReplanner final : public Replanner {
 public:
  LtlDStarReplanner(ProductAutomaton pa, PlannerOptions options)
      : planner_(std::move(pa), std::move(options)) {}

  Algorithm algorithm() const override { return Algorithm::kLtlDStar; }
  const ProductAutomaton& pa() const override { return planner_.pa(); }
  Run plan_initial(std::span<const StateId> starts) override { return planner_.plan_initial(starts); }
  Run replan(std::span<const WtsChange> changes, StateId current) override {
    return planner_.replan(changes, current);
  }
  const Run& run() const override { return planner_.run(); }
  std::size_t cursor() const override { return planner_.cursor(); }
  void advance() override { planner_.advance(); }
  std::size_t last_expansions() const override { return planner_.last_stats().expansions; }

 private:
  Planner planner_;
};

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kLtlDStar:
      return "ltl-dstar";
    case Algorithm::kIterative:
      return "iterative";
    case Algorithm::kLocalRevision:
      return "local-revision";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kLtlDStar, Algorithm::kIterative, Algorithm::kLocalRevision}) {
    if (name == to_string(a)) return a;
  }
  throw UsageError("unknown algorithm '" + std::string(name) + "'");
}

std::unique_ptr<Replanner> make_replanner(Algorithm algorithm, ProductAutomaton pa,
                                          PlannerOptions options) {
  switch (algorithm) {
    case Algorithm::kLtlDStar:
      return std::make_unique<LtlDStarReplanner>(std::move(pa), std::move(options));
    case Algorithm::kIterative:
      return std::make_unique<IterativeReplanner>(std::move(pa), std::move(options));
    case Algorithm::kLocalRevision:
      return std::make_unique<LocalRevisionReplanner>(std::move(pa), std::move(options));
  }
  throw UsageError("unknown algorithm");
}

}  // namespace ltldstar
