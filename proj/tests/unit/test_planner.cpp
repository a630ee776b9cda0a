#include <cmath>

#include <gtest/gtest.h>

#include "gae/environments.hpp"
#include "gae/errors.hpp"
#include "gae/planner.hpp"
#include "support.hpp"

using namespace gae;
using gae::testing::make_process;

TEST(ValueIteration, SingleStatePicksBetterAction) {
  const auto p = make_process(1, 2, {1.0, 1.0}, {1.0});
  StateActionTable r(1, 2);
  r(0, 1) = 1.0;
  const auto result = value_iteration(p, r);
  EXPECT_EQ(result.actions[0], 1u);
  EXPECT_EQ(result.policy(0, 1), 1.0);
}

TEST(ValueIteration, GeometricSeriesValues) {
  // Action 0 stays, action 1 moves to the other state. Reward 1 in s1.
  const auto p = make_process(2, 2, {1, 0, 0, 1,  //
                                     0, 1, 1, 0});
  StateActionTable r(2, 2);
  r(1, 0) = 1.0;
  r(1, 1) = 1.0;
  PlannerConfig cfg;
  cfg.discount = 0.9;
  cfg.tolerance = 1e-10;
  const auto result = value_iteration(p, r, cfg);
  EXPECT_NEAR(result.values[1], 10.0, 1e-8);
  EXPECT_NEAR(result.values[0], 9.0, 1e-8);
  EXPECT_EQ(result.actions[0], 1u);
  EXPECT_EQ(result.actions[1], 0u);
}

TEST(ValueIteration, TiesGoToLowestAction) {
  Rng rng(1);
  const auto p = gae::testing::random_ergodic_process(5, 4, rng);
  for (auto mode : {PlannerMode::kDiscounted, PlannerMode::kAverageReward}) {
    PlannerConfig cfg;
    cfg.mode = mode;
    const auto result = value_iteration(p, StateActionTable(5, 4, 2.5), cfg);
    for (ActionId a : result.actions) EXPECT_EQ(a, 0u);
  }
}

TEST(ValueIteration, NegativeRewardsNeedNoShift) {
  const auto p = make_process(1, 3, {1, 1, 1}, {1});
  StateActionTable r(1, 3);
  r(0, 0) = -3;
  r(0, 1) = -1;
  r(0, 2) = -2;
  EXPECT_EQ(value_iteration(p, r).actions[0], 1u);
}

TEST(ValueIteration, IterationLimitRaisesWithResidual) {
  const auto p = make_process(1, 1, {1}, {1});
  PlannerConfig cfg;
  cfg.max_iterations = 3;
  cfg.tolerance = 1e-12;
  try {
    value_iteration(p, StateActionTable(1, 1, 1.0), cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(ValueIteration, ConfigAndRewardChecks) {
  const auto p = make_process(1, 1, {1}, {1});
  PlannerConfig bad;
  bad.tolerance = 0.0;
  EXPECT_THROW(value_iteration(p, StateActionTable(1, 1), bad), ParameterError);
  bad = {};
  bad.discount = 1.0;
  EXPECT_THROW(value_iteration(p, StateActionTable(1, 1), bad), ParameterError);
  EXPECT_THROW(value_iteration(p, StateActionTable(2, 1)), ParameterError);
  EXPECT_THROW(value_iteration(p, StateActionTable(1, 1, std::nan(""))), ParameterError);
}

TEST(ValueIteration, AverageRewardGain) {
  const auto p = make_process(2, 2, {1, 0, 0, 1,  //
                                     0, 1, 1, 0});
  StateActionTable r(2, 2);
  r(1, 0) = 1.0;
  PlannerConfig cfg;
  cfg.mode = PlannerMode::kAverageReward;
  cfg.tolerance = 1e-10;
  const auto result = value_iteration(p, r, cfg);
  // Staying at s1 forever earns 1 per step.
  EXPECT_NEAR(result.gain, 1.0, 1e-8);
  EXPECT_EQ(result.actions[1], 0u);
  EXPECT_EQ(result.actions[0], 1u);
}

TEST(PolicyValue, ConstantRewardAndSymmetricChain) {
  Rng rng(2);
  const auto p = gae::testing::random_ergodic_process(4, 2, rng);
  EXPECT_NEAR(policy_value(p, Policy::uniform(4, 2), StateActionTable(4, 2, 3.5)), 3.5, 1e-10);

  const auto pair = make_process(2, 1, {0.5, 0.5, 0.5, 0.5});
  StateActionTable r(2, 1);
  r(1, 0) = 1.0;
  EXPECT_NEAR(policy_value(pair, Policy::uniform(2, 1), r), 0.5, 1e-12);
}

TEST(PolicyValue, DiffusionStayAtBestState) {
  const auto env = diffusion_env();
  const std::size_t n = env.num_states();
  StateActionTable r(n, 5);
  const StateId best = diffusion_state(0, 0, 8);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < 5; ++a) r(s, a) = env.f[s];
  }
  // Every state heads inward then clockwise to ray 0, where it stays.
  std::vector<ActionId> actions(n);
  for (std::size_t k = 0; k < 30; ++k) {
    for (std::size_t j = 0; j < 8; ++j) {
      actions[diffusion_state(k, j, 8)] = k > 0 ? kIn : (j == 0 ? kStay : kClockwise);
    }
  }
  const auto pi = Policy::deterministic(actions, 5);
  // Every other state is transient; all stationary mass sits at the best state.
  EXPECT_NEAR(policy_value(env.process, pi, r), env.f[best], 1e-8);
}

TEST(PolicyValue, SeveralClosedClassesRejected) {
  const auto p = make_process(2, 1, {1, 0, 0, 1});
  EXPECT_THROW(policy_value(p, Policy::uniform(2, 1), StateActionTable(2, 1, 1.0)),
               ErgodicityError);
}

TEST(Properties, GreedyPolicyBeatsRandomPolicies) {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % 3;
    const auto p = gae::testing::random_ergodic_process(n, m, rng);
    StateActionTable r(n, m);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (double& x : r.data()) x = unit(rng);
    PlannerConfig cfg;
    cfg.mode = PlannerMode::kAverageReward;
    const auto best = policy_value(p, value_iteration(p, r, cfg).policy, r);
    for (int k = 0; k < 100; ++k) {
      StateActionTable probs(n, m);
      for (StateId s = 0; s < n; ++s) {
        const auto w = gae::testing::random_simplex(m, rng);
        std::copy(w.begin(), w.end(), probs.row(s).begin());
      }
      EXPECT_GE(best, policy_value(p, Policy(probs), r) - 10.0 * cfg.tolerance);
    }
  }
}
