#pragma once

#include <cstddef>
#include <vector>

#include "gae/process.hpp"

namespace gae {

enum class PlannerMode { kDiscounted, kAverageReward };

struct PlannerConfig {
  PlannerMode mode = PlannerMode::kDiscounted;
  double discount = 0.99;
  /// Stop once the sup-norm change of the value table (span of the change in
  /// average-reward mode) drops below this.
  double tolerance = 1e-5;
  std::size_t max_iterations = 1'000'000;

  void check() const;
};

struct PlannerResult {
  Policy policy;                // deterministic greedy policy
  std::vector<ActionId> actions;
  std::vector<double> values;   // discounted values, or relative values
  double gain = 0.0;            // average-reward mode only
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Bellman optimality iteration on (p, reward). Returns the greedy policy of
/// the final value table with ties broken towards the lowest action index.
/// Average-reward mode runs relative value iteration on the aperiodic
/// transform 0.5 (P + I), which has the same optimal policies and gains.
/// Throws ConvergenceError (carrying the last residual) past max_iterations.
PlannerResult value_iteration(const ControlledProcess& p, const StateActionTable& reward,
                              const PlannerConfig& cfg = {});

/// Long-run average reward <λ_π, r> of policy pi. Transient states are
/// allowed; ErgodicityError when pi induces several closed classes.
double policy_value(const ControlledProcess& p, const Policy& pi, const StateActionTable& reward);

}  // namespace gae
