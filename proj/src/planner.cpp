#include "gae/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gae/errors.hpp"

namespace gae {

namespace {

// Weight on the original kernel in the aperiodic transform used by relative
// value iteration.
constexpr double kAperiodicWeight = 0.5;

double expected_next(const ControlledProcess& p, StateId s, ActionId a,
                     const std::vector<double>& values) {
  double acc = 0.0;
  for (const auto& succ : p.successors(s, a)) acc += succ.prob * values[succ.state];
  return acc;
}

// Lowest action whose Q-value is within rounding of the maximum.
ActionId greedy_action(std::span<const double> q) {
  const double best = *std::max_element(q.begin(), q.end());
  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  for (ActionId a = 0; a < q.size(); ++a) {
    if (q[a] >= best - slack) return a;
  }
  return 0;
}

void check_reward(const ControlledProcess& p, const StateActionTable& reward) {
  if (reward.num_states() != p.num_states() || reward.num_actions() != p.num_actions()) {
    throw ParameterError("reward table shape does not match the process");
  }
  for (double r : reward.data()) {
    if (!std::isfinite(r)) throw ParameterError("reward table contains non-finite entries");
  }
}

PlannerResult discounted(const ControlledProcess& p, const StateActionTable& reward,
                         const PlannerConfig& cfg) {
  const std::size_t n = p.num_states();
  const std::size_t m = p.num_actions();
  std::vector<double> values(n, 0.0);
  std::vector<double> next(n);
  PlannerResult result;
  result.residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    double residual = 0.0;
    for (StateId s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < m; ++a) {
        best = std::max(best, reward(s, a) + cfg.discount * expected_next(p, s, a, values));
      }
      next[s] = best;
      residual = std::max(residual, std::abs(best - values[s]));
    }
    values.swap(next);
    result.iterations = it;
    result.residual = residual;
    if (residual < cfg.tolerance) break;
  }
  if (!(result.residual < cfg.tolerance)) {
    throw ConvergenceError("value iteration hit the iteration limit", result.residual);
  }

  result.actions.resize(n);
  std::vector<double> q(m);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < m; ++a) q[a] = reward(s, a) + cfg.discount * expected_next(p, s, a, values);
    result.actions[s] = greedy_action(q);
  }
  result.values = std::move(values);
  return result;
}

PlannerResult average_reward(const ControlledProcess& p, const StateActionTable& reward,
                             const PlannerConfig& cfg) {
  const std::size_t n = p.num_states();
  const std::size_t m = p.num_actions();
  std::vector<double> rel(n, 0.0);
  std::vector<double> next(n);
  PlannerResult result;
  result.residual = std::numeric_limits<double>::infinity();

  const auto q_value = [&](StateId s, ActionId a, const std::vector<double>& h) {
    return reward(s, a) + kAperiodicWeight * expected_next(p, s, a, h) +
           (1.0 - kAperiodicWeight) * h[s];
  };

  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (StateId s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < m; ++a) best = std::max(best, q_value(s, a, rel));
      next[s] = best;
      lo = std::min(lo, best - rel[s]);
      hi = std::max(hi, best - rel[s]);
    }
    const double anchor = next[0];
    for (StateId s = 0; s < n; ++s) rel[s] = next[s] - anchor;
    result.iterations = it;
    result.residual = hi - lo;
    result.gain = 0.5 * (hi + lo);
    if (result.residual < cfg.tolerance) break;
  }
  if (!(result.residual < cfg.tolerance)) {
    throw ConvergenceError("relative value iteration hit the iteration limit", result.residual);
  }

  result.actions.resize(n);
  std::vector<double> q(m);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < m; ++a) q[a] = q_value(s, a, rel);
    result.actions[s] = greedy_action(q);
  }
  result.values = std::move(rel);
  return result;
}

}  // namespace

void PlannerConfig::check() const {
  if (!(tolerance > 0.0)) throw ParameterError("planner tolerance must be positive");
  if (!(discount > 0.0 && discount < 1.0)) throw ParameterError("discount must lie in (0,1)");
  if (max_iterations == 0) throw ParameterError("planner needs at least one iteration");
}

PlannerResult value_iteration(const ControlledProcess& p, const StateActionTable& reward,
                              const PlannerConfig& cfg) {
  cfg.check();
  check_reward(p, reward);
  PlannerResult result =
      cfg.mode == PlannerMode::kDiscounted ? discounted(p, reward, cfg) : average_reward(p, reward, cfg);
  result.policy = Policy::deterministic(result.actions, p.num_actions());
  return result;
}

double policy_value(const ControlledProcess& p, const Policy& pi, const StateActionTable& reward) {
  check_reward(p, reward);
  const auto lambda = unichain_stationary_distribution(p, pi);
  double value = 0.0;
  for (StateId s = 0; s < p.num_states(); ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) value += lambda(s, a) * reward(s, a);
  }
  return value;
}

}  // namespace gae
