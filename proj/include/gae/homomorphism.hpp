#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gae/process.hpp"

namespace gae {

/// MDP homomorphism (psi, {phi_s}) from an original process onto an abstract
/// one. The state map must be a surjection onto 0..S̄-1; the per-state action
/// maps are only checked for shape here, validate() reports non-surjective
/// ones.
class Homomorphism {
 public:
  Homomorphism(std::vector<StateId> state_map, std::vector<std::vector<ActionId>> action_maps);

  static Homomorphism identity(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const noexcept { return state_map_.size(); }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t num_abstract_states() const noexcept { return classes_.size(); }
  std::size_t num_abstract_actions() const noexcept { return num_abstract_actions_; }

  StateId abstract_state(StateId s) const { return state_map_[s]; }
  ActionId abstract_action(StateId s, ActionId a) const { return action_maps_[s][a]; }

  /// Members of [s̄], ascending.
  const std::vector<StateId>& members(StateId abstract_state) const {
    return classes_[abstract_state];
  }
  std::size_t class_size(StateId abstract_state) const { return classes_[abstract_state].size(); }
  std::vector<std::size_t> class_sizes() const;

  /// |phi_s^{-1}(ā)|.
  std::size_t preimage_size(StateId s, ActionId abstract_action) const;

  const std::vector<StateId>& state_map() const noexcept { return state_map_; }
  const std::vector<std::vector<ActionId>>& action_maps() const noexcept { return action_maps_; }

  bool is_identity() const;

 private:
  std::vector<StateId> state_map_;
  std::vector<std::vector<ActionId>> action_maps_;
  std::vector<std::vector<StateId>> classes_;
  std::size_t num_actions_ = 0;
  std::size_t num_abstract_actions_ = 0;
};

/// Homomorphism whose classes are the given partition of the state set. An
/// empty action_maps argument means identity maps at every state.
Homomorphism from_partition(const ControlledProcess& p,
                            const std::vector<std::vector<StateId>>& classes,
                            const std::vector<std::vector<ActionId>>& action_maps = {});

/// A finite group acting on states (L_g) and, per state, on actions (K_g^s).
struct GroupAction {
  std::vector<std::vector<StateId>> state_perms;
  /// action_perms[g][s][a] = K_g^s[a]; empty means K_g^s = identity.
  std::vector<std::vector<std::vector<ActionId>>> action_perms;

  std::size_t order() const noexcept { return state_perms.size(); }
};

/// Throws GroupStructureError unless every element is a bijection, the set
/// contains the identity and is closed under composition and inversion.
void check_group_axioms(const GroupAction& group, std::size_t num_states, std::size_t num_actions);

/// Orbits of the state action, each ascending, ordered by smallest member.
std::vector<std::vector<StateId>> orbits(const GroupAction& group, std::size_t num_states);

/// |Stab(s)| = #{g : L_g[s] = s}.
std::size_t stabilizer_order(const GroupAction& group, StateId s);

/// Homomorphism whose classes are the orbits of the group. For a class with
/// smallest member r and s = L_g[r], phi_s maps K_g^r[a] to a.
Homomorphism from_group_action(const ControlledProcess& p, const GroupAction& group);

/// Violations of the homomorphism conditions: f constant on every class (when
/// f is given) and class-summed dynamics agreeing for every state-action pair
/// that maps to the same abstract pair. Empty means valid.
std::vector<std::string> validate(const Homomorphism& h, const ControlledProcess& p,
                                  std::optional<std::span<const double>> f = std::nullopt);

/// Abstract process with P̄(s̄'|s̄,ā) = sum over [s̄'] of P(.|s,a) and
/// μ̄(s̄) = sum over [s̄] of μ. Throws HomomorphismError if the dynamics
/// condition fails for any representative.
ControlledProcess abstract_process(const Homomorphism& h, const ControlledProcess& p);

/// pi(a|s) = π̄(phi_s(a)|psi(s)) / |phi_s^{-1}(phi_s(a))|.
Policy lift_policy(const Homomorphism& h, const Policy& abstract_policy);

/// λ̄(s̄,ā) = sum of λ(s,a) over s in [s̄] and a in phi_s^{-1}(ā).
StateActionTable aggregate_table(const Homomorphism& h, const StateActionTable& table);

/// r(s,a) = r̄(psi(s), phi_s(a)).
StateActionTable expand_table(const Homomorphism& h, const StateActionTable& abstract_table);

/// Φ = S̄ / S.
double compression(const Homomorphism& h);

/// Φ = |Stab| / |G| under a uniform stabilizer. Throws ArithmeticError if
/// |Stab| does not divide |G|.
double compression_via_group(std::size_t group_order, std::size_t stabilizer_order);

/// True iff every class has the same size.
bool check_homogeneous(const Homomorphism& h);

}  // namespace gae
