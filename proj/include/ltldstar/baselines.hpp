#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "ltldstar/planner.hpp"
#include "ltldstar/product.hpp"
#include "ltldstar/replanner.hpp"

namespace ltldstar {

/// Brute-force optimum over every accepting state k: prefix_k + beta * loop_k.
struct OracleResult {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<Weight> prefix;  // cheapest path from the start set to s_acc^k
  std::vector<Weight> loop;    // cheapest cycle (>= 1 edge) through s_acc^k
  std::size_t best = kNone;    // lowest k attaining best_total
  Weight best_total = Weight::infinity();
};

/// Forward lexicographic Dijkstra from the start set plus one Dijkstra per
/// accepting state for its loop.
OracleResult dijkstra_oracle(const ProductAutomaton& pa, std::span<const StateId> starts,
                             std::int64_t beta);

/// Same quantities computed by Bellman-Ford relaxation (slow; small instances).
OracleResult bellman_ford_oracle(const ProductAutomaton& pa, std::span<const StateId> starts,
                                 std::int64_t beta);

/// Optimal run from scratch using backward Dijkstra searches with the same
/// imaginary-goal construction and path tie-breaking as the planner.
/// Throws NoAcceptingRun. `expansions` receives the number of settled nodes.
Run dijkstra_plan(const ProductAutomaton& pa, std::span<const StateId> starts, std::int64_t beta,
                  std::size_t* expansions = nullptr);

/// Replans from scratch with Dijkstra on every event.
class IterativeReplanner final : public Replanner {
 public:
  IterativeReplanner(ProductAutomaton pa, PlannerOptions options);

  Algorithm algorithm() const override { return Algorithm::kIterative; }
  const ProductAutomaton& pa() const override { return pa_; }
  Run plan_initial(std::span<const StateId> starts) override;
  Run replan(std::span<const WtsChange> changes, StateId current) override;
  const Run& run() const override { return run_; }
  std::size_t cursor() const override { return cursor_; }
  void advance() override { ++cursor_; }
  std::size_t last_expansions() const override { return expansions_; }

 private:
  ProductAutomaton pa_;
  PlannerOptions options_;
  Run run_;
  std::size_t cursor_ = 0;
  std::size_t expansions_ = 0;
};

/// Repairs the previous run locally: the cheapest detour from the current
/// state that rejoins the remaining part of the run in the same phase, and an
/// independent repair of the loop from its first changed edge. The accepting
/// state is kept. Falls back to a full optimal replan when no rejoin exists.
class LocalRevisionReplanner final : public Replanner {
 public:
  LocalRevisionReplanner(ProductAutomaton pa, PlannerOptions options);

  Algorithm algorithm() const override { return Algorithm::kLocalRevision; }
  const ProductAutomaton& pa() const override { return pa_; }
  Run plan_initial(std::span<const StateId> starts) override;
  Run replan(std::span<const WtsChange> changes, StateId current) override;
  const Run& run() const override { return run_; }
  std::size_t cursor() const override { return cursor_; }
  void advance() override { ++cursor_; }
  std::size_t last_expansions() const override { return expansions_; }
  std::size_t fallbacks() const override { return fallbacks_; }

 private:
  ProductAutomaton pa_;
  PlannerOptions options_;
  Run run_;
  std::size_t cursor_ = 0;
  std::size_t expansions_ = 0;
  std::size_t fallbacks_ = 0;
};

}  // namespace ltldstar
