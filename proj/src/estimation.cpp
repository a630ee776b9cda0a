#include "gae/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "gae/errors.hpp"

namespace gae {

namespace {

void check_function(const EstimatorState& e, std::span<const double> f_true) {
  if (f_true.size() != e.num_states()) throw ParameterError("f has wrong number of states");
}

void check_homomorphism(const EstimatorState& e, const Homomorphism& h) {
  if (h.num_states() != e.num_states()) {
    throw ParameterError("homomorphism and estimator disagree on the state count");
  }
}

}  // namespace

EstimatorState::EstimatorState(std::size_t num_states, std::size_t num_actions)
    : num_actions_(num_actions),
      count_(num_states, 0),
      pair_count_(num_states * num_actions, 0),
      sum_(num_states, 0.0),
      sum_sq_(num_states, 0.0) {}

void EstimatorState::record(StateId s, ActionId a, double x) {
  if (s >= count_.size()) throw IndexError("state index out of range");
  if (a >= num_actions_) throw IndexError("action index out of range");
  if (!std::isfinite(x)) throw ObservationError("observation is not finite");
  ++count_[s];
  ++pair_count_[s * num_actions_ + a];
  sum_[s] += x;
  sum_sq_[s] += x * x;
  ++steps_;
}

double count_plus(const EstimatorState& e, StateId s) {
  return static_cast<double>(std::max<std::uint64_t>(1, e.count(s)));
}

double empirical_mean(const EstimatorState& e, StateId s) { return e.sum(s) / count_plus(e, s); }

double empirical_variance(const EstimatorState& e, StateId s) {
  const double mean = empirical_mean(e, s);
  return std::max(0.0, e.sum_sq(s) / count_plus(e, s) - mean * mean);
}

double class_count_plus(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                        ClassCountRule rule) {
  double total = 0.0;
  for (StateId s : h.members(abstract_state)) {
    total += rule == ClassCountRule::kMemberSum ? count_plus(e, s)
                                                : static_cast<double>(e.count(s));
  }
  return std::max(1.0, total);
}

double abstract_mean(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                     ClassCountRule rule) {
  check_homomorphism(e, h);
  // T(s) f̂(s) is the raw observation sum for every s, visited or not.
  double weighted = 0.0;
  for (StateId s : h.members(abstract_state)) weighted += e.sum(s);
  return weighted / class_count_plus(e, h, abstract_state, rule);
}

double abstract_variance(const EstimatorState& e, const Homomorphism& h, StateId abstract_state,
                         ClassCountRule rule) {
  check_homomorphism(e, h);
  double sum_sq = 0.0;
  for (StateId s : h.members(abstract_state)) sum_sq += e.sum_sq(s);
  const double mean = abstract_mean(e, h, abstract_state, rule);
  return std::max(0.0, sum_sq / class_count_plus(e, h, abstract_state, rule) - mean * mean);
}

double aggregated_mean(const EstimatorState& e, const Homomorphism& h, StateId s,
                       ClassCountRule rule) {
  check_homomorphism(e, h);
  return abstract_mean(e, h, h.abstract_state(s), rule);
}

double geometric_error(const EstimatorState& e, const Homomorphism& h,
                       std::span<const double> f_true, ClassCountRule rule) {
  check_function(e, f_true);
  check_homomorphism(e, h);
  std::vector<double> class_mean(h.num_abstract_states());
  for (StateId c = 0; c < class_mean.size(); ++c) class_mean[c] = abstract_mean(e, h, c, rule);
  double total = 0.0;
  for (StateId s = 0; s < e.num_states(); ++s) {
    total += std::abs(class_mean[h.abstract_state(s)] - f_true[s]);
  }
  return total / static_cast<double>(e.num_states());
}

double classic_error(const EstimatorState& e, std::span<const double> f_true) {
  check_function(e, f_true);
  double total = 0.0;
  for (StateId s = 0; s < e.num_states(); ++s) total += std::abs(empirical_mean(e, s) - f_true[s]);
  return total / static_cast<double>(e.num_states());
}

double abstract_error_form(const EstimatorState& e, const Homomorphism& h,
                           std::span<const double> f_true, ClassCountRule rule) {
  check_function(e, f_true);
  check_homomorphism(e, h);
  double total = 0.0;
  for (StateId c = 0; c < h.num_abstract_states(); ++c) {
    const double f_class = f_true[h.members(c).front()];
    total += static_cast<double>(h.class_size(c)) * std::abs(abstract_mean(e, h, c, rule) - f_class);
  }
  return total / static_cast<double>(e.num_states());
}

ErrorReport error_report(const EstimatorState& e, const Homomorphism& h,
                         std::span<const double> f_true, ClassCountRule rule) {
  return {geometric_error(e, h, f_true, rule), classic_error(e, f_true),
          abstract_error_form(e, h, f_true, rule)};
}

StateActionDistribution empirical_frequency(const EstimatorState& e) {
  if (e.steps() == 0) throw EmptyTraceError("empirical frequency needs at least one step");
  const double t = static_cast<double>(e.steps());
  StateActionTable lambda(e.num_states(), e.num_actions());
  for (StateId s = 0; s < e.num_states(); ++s) {
    for (ActionId a = 0; a < e.num_actions(); ++a) {
      lambda(s, a) = static_cast<double>(e.count(s, a)) / t;
    }
  }
  return StateActionDistribution(std::move(lambda));
}

std::vector<EstimateRow> snapshot(const EstimatorState& e) {
  std::vector<EstimateRow> rows;
  rows.reserve(e.num_states());
  for (StateId s = 0; s < e.num_states(); ++s) {
    rows.push_back({s, e.count(s), empirical_mean(e, s), empirical_variance(e, s)});
  }
  return rows;
}

}  // namespace gae
