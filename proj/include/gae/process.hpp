#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gae {

using StateId = std::size_t;
using ActionId = std::size_t;
using Rng = std::mt19937_64;

/// Tolerance used when checking constructed probability tables.
inline constexpr double kConstructionTol = 1e-9;
/// Tolerance used when checking derived quantities (stationary flows etc.).
inline constexpr double kDerivedTol = 1e-8;

/// Dense row-major table indexed by (state, action).
class StateActionTable {
 public:
  StateActionTable() = default;
  StateActionTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0)
      : num_states_(num_states), num_actions_(num_actions), data_(num_states * num_actions, fill) {}
  StateActionTable(std::size_t num_states, std::size_t num_actions, std::vector<double> data);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  double& operator()(StateId s, ActionId a) { return data_[s * num_actions_ + a]; }
  double operator()(StateId s, ActionId a) const { return data_[s * num_actions_ + a]; }

  std::span<double> row(StateId s) { return {data_.data() + s * num_actions_, num_actions_}; }
  std::span<const double> row(StateId s) const {
    return {data_.data() + s * num_actions_, num_actions_};
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const StateActionTable&) const = default;

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> data_;
};

/// Stationary Markov policy pi(a|s).
class Policy {
 public:
  Policy() = default;
  explicit Policy(StateActionTable probs) : probs_(std::move(probs)) {}

  static Policy uniform(std::size_t num_states, std::size_t num_actions);
  static Policy deterministic(std::span<const ActionId> actions, std::size_t num_actions);

  std::size_t num_states() const noexcept { return probs_.num_states(); }
  std::size_t num_actions() const noexcept { return probs_.num_actions(); }
  double operator()(StateId s, ActionId a) const { return probs_(s, a); }
  std::span<const double> row(StateId s) const { return probs_.row(s); }
  const StateActionTable& table() const noexcept { return probs_; }

  /// Rows that do not sum to one (or carry negative mass), as messages.
  std::vector<std::string> violations(double tol = kConstructionTol) const;

  ActionId sample(StateId s, Rng& rng) const;

 private:
  StateActionTable probs_;
};

/// Probability mass over state-action pairs, e.g. a member of the set of
/// admissible stationary occupancies or an empirical visit frequency.
class StateActionDistribution {
 public:
  StateActionDistribution() = default;
  explicit StateActionDistribution(StateActionTable mass) : mass_(std::move(mass)) {}

  std::size_t num_states() const noexcept { return mass_.num_states(); }
  std::size_t num_actions() const noexcept { return mass_.num_actions(); }
  double operator()(StateId s, ActionId a) const { return mass_(s, a); }
  const StateActionTable& table() const noexcept { return mass_; }

  /// lambda(s) = sum_a lambda(s, a).
  std::vector<double> state_marginal() const;
  double total_mass() const;

 private:
  StateActionTable mass_;
};

/// Finite controlled Markov process: states, actions, kernel P(s'|s,a) and
/// initial distribution. Construction only checks shapes; use
/// validate_process() for the stochasticity invariants.
class ControlledProcess {
 public:
  struct Successor {
    StateId state;
    double prob;
  };

  ControlledProcess(std::size_t num_states, std::size_t num_actions,
                    std::vector<double> transitions, std::vector<double> initial_dist);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  double prob(StateId s, ActionId a, StateId next) const {
    return transitions_[(s * num_actions_ + a) * num_states_ + next];
  }
  std::span<const double> row(StateId s, ActionId a) const {
    return {transitions_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }
  /// Non-zero entries of P(.|s,a) in increasing state order.
  std::span<const Successor> successors(StateId s, ActionId a) const;

  const std::vector<double>& transitions() const noexcept { return transitions_; }
  const std::vector<double>& initial_dist() const noexcept { return initial_; }

  /// Throws ParameterError listing every violation if validate_process fails.
  void ensure_valid() const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transitions_;
  std::vector<double> initial_;
  std::vector<Successor> sparse_;
  std::vector<std::size_t> sparse_offsets_;
};

/// Violated invariants of p; empty means valid.
std::vector<std::string> validate_process(const ControlledProcess& p);

/// Draws s' ~ P(.|s,a).
StateId step(const ControlledProcess& p, StateId s, ActionId a, Rng& rng);

/// Draws s0 ~ mu.
StateId sample_initial(const ControlledProcess& p, Rng& rng);

/// Dense state-to-state kernel induced by pi, row-major S x S.
std::vector<double> induced_chain(const ControlledProcess& p, const Policy& pi);

/// Stationary state-action distribution lambda(s,a) = d(s) pi(a|s) of the
/// chain induced by pi. Throws ErgodicityError if that chain is reducible or
/// periodic.
StateActionDistribution stationary_distribution(const ControlledProcess& p, const Policy& pi);

/// Stationary law of a chain with exactly one closed class; transient states
/// get zero mass and periodic classes are allowed. Throws ErgodicityError
/// when several closed classes exist.
StateActionDistribution unichain_stationary_distribution(const ControlledProcess& p,
                                                         const Policy& pi);

/// max_s |sum_b lambda(s,b) - sum_{s',a} P(s|s',a) lambda(s',a)|.
double flow_residual(const StateActionDistribution& lambda, const ControlledProcess& p);

struct ErgodicityReport {
  bool ergodic = false;
  bool irreducible = false;
  std::size_t period = 0;  // 0 when reducible
  std::string diagnostic;
};

/// Irreducibility and aperiodicity of the chain induced by the uniform policy.
/// This is a necessary condition only; other policies may still induce
/// non-ergodic chains.
ErgodicityReport check_ergodicity(const ControlledProcess& p);

/// Same analysis for the chain induced by an arbitrary policy.
ErgodicityReport check_ergodicity(const ControlledProcess& p, const Policy& pi);

}  // namespace gae
