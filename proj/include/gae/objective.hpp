#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gae/homomorphism.hpp"
#include "gae/process.hpp"

namespace gae {

struct ObjectiveParams {
  double eta = 1e-3;       // smoothing added to every state's mass
  double delta = 0.01;     // confidence level
  double f_max = 1.0;      // upper bound on observations
  std::size_t num_states = 1;
  std::vector<std::size_t> class_sizes;  // E_s̄, one per abstract state

  static ObjectiveParams from(const Homomorphism& h, double eta, double delta, double f_max);

  std::size_t num_abstract_states() const noexcept { return class_sizes.size(); }

  /// Throws ParameterError unless eta > 0, 0 < delta < 1 and f_max > 0.
  void check() const;
};

/// Smoothed objective over abstract state masses λ̄(s̄) = sum_{s in [s̄]} λ(s):
///   (1/S) sum_s̄ E_s̄ sqrt(2 σ²(s̄) / (λ̄(s̄) + E_s̄ η)).
/// η = 0 is accepted as long as every denominator stays positive.
double objective_value(std::span<const double> abstract_mass, std::span<const double> variance,
                       const ObjectiveParams& params);

/// Same objective evaluated on an original-space distribution.
double objective_value(const StateActionDistribution& lambda, const Homomorphism& h,
                       std::span<const double> variance, const ObjectiveParams& params);

/// dL/dλ(s,a) for the objective above. Depends on (s,a) only through the
/// class of s.
StateActionTable objective_gradient(const StateActionDistribution& lambda, const Homomorphism& h,
                                    std::span<const double> variance,
                                    const ObjectiveParams& params);

/// Optimistic confidence width on the standard deviation of a class:
///   F_max sqrt(2 log(2 S̄ t² / δ) / T⁺).
double variance_bonus(std::uint64_t t, std::size_t num_abstract_states, double delta,
                      double f_max, double count_plus);

/// Optimistic abstract gradient table
///   r̄(s̄,ā) = -E_s̄ [sqrt(2 σ̂²(s̄)) + α(s̄)] / (2 S (λ̄(s̄) + E_s̄ η)^{3/2}),
/// identical across ā. The values are non-positive: the table is the
/// linearisation of a quantity being minimised.
StateActionTable abstract_reward(const StateActionTable& abstract_lambda,
                                 std::span<const double> empirical_variance,
                                 std::span<const double> bonus, const ObjectiveParams& params);

/// True iff the original-space table is bit-identical across every pair of
/// state-action pairs whose states share a class.
bool gradient_invariance_check(const StateActionTable& original_table, const Homomorphism& h);

/// Upper bound A sqrt(2 Φ^5) sqrt(σ²_max) / η^{5/2} on the smoothness
/// constant of the objective.
double smoothness_bound(double eta, double sigma2_max, std::size_t num_actions, double phi);

/// Finite-sample objective
///   (1/S) sum_s̄ E_s̄ [ sqrt(2σ²/(λ̄ + 1/n)) + F_max / (sqrt(n) (λ̄ + 1/n)) ].
double finite_sample_objective(std::span<const double> abstract_mass,
                               std::span<const double> variance, const ObjectiveParams& params,
                               std::uint64_t n);

/// C(n, S̄, δ) = max{log(n S̄ / δ), sqrt(log(n S̄ / δ))}.
double confidence_factor(std::uint64_t n, std::size_t num_abstract_states, double delta);

/// High-probability bound on the geometric error after n samples given the
/// class visit counts:
///   (C/S) sum_s̄ E_s̄ (sqrt(2σ²(s̄)/T⁺(s̄)) + F_max/T⁺(s̄)).
double count_error_bound(std::uint64_t n, std::span<const double> variance,
                         std::span<const double> class_count_plus,
                         const ObjectiveParams& params);

/// Bound on the geometric error in terms of the empirical frequency λ_n:
///   (2S/sqrt(n)) C [L(λ_n) + S̄ F_max / (S sqrt(n) η)].
/// Meaningful when E_s̄ η <= 1/n for every class.
double frequency_error_bound(std::uint64_t n, std::span<const double> abstract_mass,
                             std::span<const double> variance, const ObjectiveParams& params);

/// λ̄(s̄) for every abstract state.
std::vector<double> abstract_mass(const StateActionDistribution& lambda, const Homomorphism& h);

}  // namespace gae
