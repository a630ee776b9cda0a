#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gae/environments.hpp"
#include "gae/estimation.hpp"
#include "gae/homomorphism.hpp"
#include "gae/planner.hpp"

namespace gae {

enum class ScheduleMode {
  kCubic,     // τ_k = 3k² - 3k + 1, so the first k iterations take k³ steps
  kConstant,  // τ_k = tau
};

enum class LambdaUpdate {
  /// λ̄_{k+1} = (τ_k ṽ̄ + (t_k - 1) λ̄_k) / (t_{k+1} - 1): the running
  /// empirical frequency.
  kMixture,
  /// λ̄_{k+1} = normalize(λ̄_k + (c / S̄) ṽ̄).
  kConstantStep,
};

/// What the run returns as its final estimate of f.
enum class InferenceMode { kAggregated, kClassic };

struct GaeConfig {
  std::uint64_t budget = 210;
  ScheduleMode schedule = ScheduleMode::kConstant;
  std::uint64_t tau = 3;
  double eta = 1e-3;
  double delta = 0.01;
  LambdaUpdate lambda_update = LambdaUpdate::kConstantStep;
  double step_constant = 0.005;
  PlannerConfig planner{};
  InferenceMode inference = InferenceMode::kAggregated;
  ClassCountRule class_count = ClassCountRule::kClassTotal;
  std::uint64_t seed = 0;
  /// When false planner_ms is recorded as 0 so traces are reproducible
  /// byte for byte.
  bool record_timing = true;

  void check() const;
};

/// τ_k for iteration k >= 1.
std::uint64_t interactions(const GaeConfig& cfg, std::uint64_t k);

/// Cumulative step counts at the end of every iteration, truncated at the
/// budget.
std::vector<std::uint64_t> iteration_ends(const GaeConfig& cfg);

struct IterationRecord {
  std::uint64_t k = 0;
  std::uint64_t t = 0;         // steps taken so far
  double xi_geo = 0.0;         // error of the class-aggregated estimate
  double xi_classic = 0.0;     // error of the per-state estimate
  double objective = 0.0;      // smoothed objective at λ̄_{k+1}, true variances
  double planner_ms = 0.0;
};

struct RunTrace {
  std::uint64_t seed = 0;
  double compression = 1.0;           // Φ of the planning homomorphism
  std::vector<IterationRecord> records;
  std::vector<std::uint64_t> final_counts;
  double total_ms = 0.0;
};

struct RunResult {
  RunTrace trace;
  std::vector<double> estimates;  // per original state
  EstimatorState estimator;
};

/// Geometric active exploration: plans on the abstract process induced by
/// `plan`, deploys lifted policies in env, and reports errors with the class
/// structure of `evaluate`. Throws HomomorphismError if either homomorphism
/// fails validation against (P, f), ErgodicityError if the uniform policy is
/// not ergodic, and ConvergenceError from the planner.
RunResult run_exploration(const Environment& env, const Homomorphism& plan,
                          const Homomorphism& evaluate, const GaeConfig& cfg);

RunResult run_gae(const Environment& env, const Homomorphism& h, const GaeConfig& cfg);

/// Symmetry-blind baseline: identity homomorphism for planning and inference.
RunResult run_ae(const Environment& env, const GaeConfig& cfg);

/// AE exploration, with the aggregated error under h reported next to the
/// per-state error. The returned estimates are the per-state ones.
RunResult run_inference_bias_ablation(const Environment& env, const Homomorphism& h,
                                      const GaeConfig& cfg);

/// ξ̄ at checkpoint t: the last record with record.t <= t, or the error of
/// the all-zero estimate before the first record.
double error_at(const RunTrace& trace, std::uint64_t t, double initial_error, bool geometric = true);

/// Smallest checkpoint at which at least a (1 - δ) fraction of `repeats`
/// seeded runs (seeds cfg.seed, cfg.seed + 1, ...) have ξ̄ <= epsilon;
/// std::nullopt when no checkpoint qualifies.
std::optional<std::uint64_t> measure_sample_complexity(const Environment& env,
                                                       const Homomorphism& h,
                                                       const GaeConfig& cfg, double epsilon,
                                                       std::size_t repeats,
                                                       std::span<const std::uint64_t> checkpoints);

}  // namespace gae
