#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gae/homomorphism.hpp"
#include "gae/process.hpp"

namespace gae {

/// How the class-level visit count T⁺([s]) is formed from member counts.
enum class ClassCountRule {
  /// max{1, sum of T(s') over the class}: the plain pooled count.
  kClassTotal,
  /// sum of max{1, T(s')} over the class. Every unvisited member adds a
  /// phantom visit, which shrinks the pooled estimate of partially visited
  /// classes towards zero.
  kMemberSum,
};

/// Running visit counts and observation sums for every state (and counts for
/// every state-action pair).
class EstimatorState {
 public:
  EstimatorState(std::size_t num_states, std::size_t num_actions);

  /// Adds an observation x taken at s while playing a. Throws
  /// ObservationError for non-finite x and IndexError for bad indices.
  void record(StateId s, ActionId a, double x);

  std::size_t num_states() const noexcept { return count_.size(); }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::uint64_t steps() const noexcept { return steps_; }

  std::uint64_t count(StateId s) const { return count_[s]; }
  std::uint64_t count(StateId s, ActionId a) const { return pair_count_[s * num_actions_ + a]; }
  double sum(StateId s) const { return sum_[s]; }
  double sum_sq(StateId s) const { return sum_sq_[s]; }

 private:
  std::size_t num_actions_;
  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> count_;
  std::vector<std::uint64_t> pair_count_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

/// max{1, T(s)}.
double count_plus(const EstimatorState& e, StateId s);

/// Sample mean with a T⁺ denominator; 0 for unvisited states.
double empirical_mean(const EstimatorState& e, StateId s);

/// Biased (population) sample variance with a T⁺ denominator, clamped at 0.
double empirical_variance(const EstimatorState& e, StateId s);

/// T⁺ of the class [s̄] under the given rule.
double class_count_plus(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                        ClassCountRule rule = ClassCountRule::kClassTotal);

/// Pooled class mean f̂(s̄) = sum_{s in [s̄]} T(s) f̂(s) / T⁺([s̄]).
double abstract_mean(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                     ClassCountRule rule = ClassCountRule::kClassTotal);

/// Pooled class variance sum x^2 / T⁺([s̄]) - f̂(s̄)^2, clamped at 0.
double abstract_variance(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                         ClassCountRule rule = ClassCountRule::kClassTotal);

/// f̂ᴬ(s): abstract_mean of the class containing s.
double aggregated_mean(const EstimatorState& e, const Homomorphism& h, StateId s,
                       ClassCountRule rule = ClassCountRule::kClassTotal);

/// (1/S) sum_s |f̂ᴬ(s) - f(s)|.
double geometric_error(const EstimatorState& e, const Homomorphism& h,
                       std::span<const double> f_true,
                       ClassCountRule rule = ClassCountRule::kClassTotal);

/// (1/S) sum_s |f̂(s) - f(s)|.
double classic_error(const EstimatorState& e, std::span<const double> f_true);

/// (1/S) sum_s̄ E_s̄ |f̂(s̄) - f(s̄)|, with f(s̄) read at the smallest member.
double abstract_error_form(const EstimatorState& e, const Homomorphism& h,
                           std::span<const double> f_true,
                           ClassCountRule rule = ClassCountRule::kClassTotal);

struct ErrorReport {
  double geometric_error = 0.0;
  double classic_error = 0.0;
  double abstract_form = 0.0;
};

ErrorReport error_report(const EstimatorState& e, const Homomorphism& h,
                         std::span<const double> f_true,
                         ClassCountRule rule = ClassCountRule::kClassTotal);

/// λ_t(s,a) = T(s,a)/t. Throws EmptyTraceError when no step was recorded.
StateActionDistribution empirical_frequency(const EstimatorState& e);

struct EstimateRow {
  StateId state;
  std::uint64_t count;
  double mean;
  double variance;
};

std::vector<EstimateRow> snapshot(const EstimatorState& e);

}  // namespace gae
