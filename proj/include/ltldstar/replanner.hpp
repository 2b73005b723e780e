#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>

#include "ltldstar/planner.hpp"
#include "ltldstar/product.hpp"

namespace ltldstar {

enum class Algorithm { kLtlDStar, kIterative, kLocalRevision };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// Common driver surface for LTL-D* and the comparison baselines: plan, replan
/// on WTS changes, and robot position bookkeeping along the active run.
class Replanner {
 public:
  virtual ~Replanner() = default;

  virtual Algorithm algorithm() const = 0;
  virtual const ProductAutomaton& pa() const = 0;

  virtual Run plan_initial(std::span<const StateId> starts) = 0;
  /// Applies the changes and returns the new run from `current`.
  virtual Run replan(std::span<const WtsChange> changes, StateId current) = 0;

  virtual const Run& run() const = 0;
  virtual std::size_t cursor() const = 0;
  virtual void advance() = 0;
  virtual std::size_t last_expansions() const = 0;
  /// Local revision only: replans that fell back to a full optimal replan.
  virtual std::size_t fallbacks() const { return 0; }

  StateId current_state() const { return run().state_at(cursor()); }
  StateId next_state() const { return run().state_at(cursor() + 1); }
  Phase phase() const { return run().in_suffix(cursor()) ? Phase::kSuffix : Phase::kPrefix; }
};

std::unique_ptr<Replanner> make_replanner(Algorithm algorithm, ProductAutomaton pa,
                                          PlannerOptions options);

}  // namespace ltldstar
