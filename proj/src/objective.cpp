#include "gae/objective.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "gae/errors.hpp"

namespace gae {

namespace {

void check_lengths(const ObjectiveParams& params, std::span<const double> mass,
                   std::span<const double> variance) {
  if (mass.size() != params.num_abstract_states() ||
      variance.size() != params.num_abstract_states()) {
    throw ParameterError("objective inputs need one entry per abstract state");
  }
}

double smoothed_mass(const ObjectiveParams& params, std::span<const double> mass, std::size_t c) {
  const double denom = mass[c] + static_cast<double>(params.class_sizes[c]) * params.eta;
  if (!(denom > 0.0)) {
    throw ParameterError("objective denominator is not positive; increase the smoothing eta");
  }
  return denom;
}

}  // namespace

ObjectiveParams ObjectiveParams::from(const Homomorphism& h, double eta, double delta,
                                      double f_max) {
  return {eta, delta, f_max, h.num_states(), h.class_sizes()};
}

void ObjectiveParams::check() const {
  if (!(eta > 0.0)) throw ParameterError("smoothing eta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("confidence delta must lie in (0,1)");
  if (!(f_max > 0.0)) throw ParameterError("observation bound F_max must be positive");
  if (num_states == 0 || class_sizes.empty()) throw ParameterError("empty state space");
}

double objective_value(std::span<const double> abstract_mass, std::span<const double> variance,
                       const ObjectiveParams& params) {
  if (params.eta < 0.0) throw ParameterError("smoothing eta must not be negative");
  check_lengths(params, abstract_mass, variance);
  double total = 0.0;
  for (std::size_t c = 0; c < abstract_mass.size(); ++c) {
    const double e = static_cast<double>(params.class_sizes[c]);
    total += e * std::sqrt(2.0 * variance[c] / smoothed_mass(params, abstract_mass, c));
  }
  return total / static_cast<double>(params.num_states);
}

double objective_value(const StateActionDistribution& lambda, const Homomorphism& h,
                       std::span<const double> variance, const ObjectiveParams& params) {
  return objective_value(abstract_mass(lambda, h), variance, params);
}

StateActionTable objective_gradient(const StateActionDistribution& lambda, const Homomorphism& h,
                                    std::span<const double> variance,
                                    const ObjectiveParams& params) {
  if (params.eta < 0.0) throw ParameterError("smoothing eta must not be negative");
  const auto mass = abstract_mass(lambda, h);
  check_lengths(params, mass, variance);
  std::vector<double> per_class(mass.size());
  for (std::size_t c = 0; c < mass.size(); ++c) {
    const double e = static_cast<double>(params.class_sizes[c]);
    per_class[c] = -e * std::sqrt(2.0 * variance[c]) /
                   (2.0 * static_cast<double>(params.num_states) *
                    std::pow(smoothed_mass(params, mass, c), 1.5));
  }
  StateActionTable grad(h.num_states(), h.num_actions());
  for (StateId s = 0; s < h.num_states(); ++s) {
    for (ActionId a = 0; a < h.num_actions(); ++a) grad(s, a) = per_class[h.abstract_state(s)];
  }
  return grad;
}

double variance_bonus(std::uint64_t t, std::size_t num_abstract_states, double delta,
                      double f_max, double count_plus) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("confidence delta must lie in (0,1)");
  if (t < 1) throw ParameterError("variance bonus needs t >= 1");
  if (!(count_plus >= 1.0)) throw ParameterError("variance bonus needs T+ >= 1");
  const double td = static_cast<double>(t);
  const double log_term =
      std::log(2.0 * static_cast<double>(num_abstract_states) * td * td / delta);
  return f_max * std::sqrt(2.0 * log_term / count_plus);
}

StateActionTable abstract_reward(const StateActionTable& abstract_lambda,
                                 std::span<const double> empirical_variance,
                                 std::span<const double> bonus, const ObjectiveParams& params) {
  const std::size_t nbar = params.num_abstract_states();
  if (abstract_lambda.num_states() != nbar || empirical_variance.size() != nbar ||
      bonus.size() != nbar) {
    throw ParameterError("abstract reward inputs need one entry per abstract state");
  }
  std::vector<double> mass(nbar, 0.0);
  for (StateId c = 0; c < nbar; ++c) {
    for (double x : abstract_lambda.row(c)) mass[c] += x;
  }
  StateActionTable reward(nbar, abstract_lambda.num_actions());
  for (StateId c = 0; c < nbar; ++c) {
    const double e = static_cast<double>(params.class_sizes[c]);
    const double value = -e * (std::sqrt(2.0 * empirical_variance[c]) + bonus[c]) /
                         (2.0 * static_cast<double>(params.num_states) *
                          std::pow(smoothed_mass(params, mass, c), 1.5));
    for (double& x : reward.row(c)) x = value;
  }
  return reward;
}

bool gradient_invariance_check(const StateActionTable& original_table, const Homomorphism& h) {
  if (original_table.num_states() != h.num_states() ||
      original_table.num_actions() != h.num_actions()) {
    return false;
  }
  for (StateId c = 0; c < h.num_abstract_states(); ++c) {
    const double ref = original_table(h.members(c).front(), 0);
    for (StateId s : h.members(c)) {
      for (double x : original_table.row(s)) {
        if (std::memcmp(&x, &ref, sizeof(double)) != 0) return false;
      }
    }
  }
  return true;
}

double smoothness_bound(double eta, double sigma2_max, std::size_t num_actions, double phi) {
  if (!(eta > 0.0)) throw ParameterError("smoothing eta must be positive");
  return static_cast<double>(num_actions) * std::sqrt(2.0 * std::pow(phi, 5.0)) *
         std::sqrt(sigma2_max) / std::pow(eta, 2.5);
}

double finite_sample_objective(std::span<const double> abstract_mass,
                               std::span<const double> variance, const ObjectiveParams& params,
                               std::uint64_t n) {
  check_lengths(params, abstract_mass, variance);
  if (n == 0) throw ParameterError("finite-sample objective needs n >= 1");
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t c = 0; c < abstract_mass.size(); ++c) {
    const double e = static_cast<double>(params.class_sizes[c]);
    const double denom = abstract_mass[c] + 1.0 / nd;
    total += e * (std::sqrt(2.0 * variance[c] / denom) + params.f_max / (std::sqrt(nd) * denom));
  }
  return total / static_cast<double>(params.num_states);
}

double confidence_factor(std::uint64_t n, std::size_t num_abstract_states, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("confidence delta must lie in (0,1)");
  if (n == 0 || num_abstract_states == 0) {
    throw ParameterError("confidence factor needs n >= 1 and at least one abstract state");
  }
  const double l =
      std::log(static_cast<double>(n) * static_cast<double>(num_abstract_states) / delta);
  return std::max(l, std::sqrt(l));
}

double count_error_bound(std::uint64_t n, std::span<const double> variance,
                         std::span<const double> class_count_plus,
                         const ObjectiveParams& params) {
  check_lengths(params, class_count_plus, variance);
  double total = 0.0;
  for (std::size_t c = 0; c < variance.size(); ++c) {
    const double e = static_cast<double>(params.class_sizes[c]);
    const double tp = class_count_plus[c];
    total += e * (std::sqrt(2.0 * variance[c] / tp) + params.f_max / tp);
  }
  return confidence_factor(n, params.num_abstract_states(), params.delta) * total /
         static_cast<double>(params.num_states);
}

double frequency_error_bound(std::uint64_t n, std::span<const double> abstract_mass,
                             std::span<const double> variance, const ObjectiveParams& params) {
  const double nd = static_cast<double>(n);
  const double s = static_cast<double>(params.num_states);
  const double sbar = static_cast<double>(params.num_abstract_states());
  const double inner = objective_value(abstract_mass, variance, params) +
                       sbar * params.f_max / (s * std::sqrt(nd) * params.eta);
  return 2.0 * s / std::sqrt(nd) * confidence_factor(n, params.num_abstract_states(), params.delta) *
         inner;
}

std::vector<double> abstract_mass(const StateActionDistribution& lambda, const Homomorphism& h) {
  if (lambda.num_states() != h.num_states()) {
    throw ParameterError("distribution and homomorphism disagree on the state count");
  }
  std::vector<double> mass(h.num_abstract_states(), 0.0);
  const auto marginal = lambda.state_marginal();
  for (StateId s = 0; s < h.num_states(); ++s) mass[h.abstract_state(s)] += marginal[s];
  return mass;
}

}  // namespace gae
