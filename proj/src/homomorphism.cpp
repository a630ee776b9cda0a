#include "gae/homomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "gae/errors.hpp"

namespace gae {

namespace {

constexpr double kInvarianceTol = 1e-9;
constexpr std::size_t kMaxReportedViolations = 64;

// (L, K) pair flattened into one vector so group elements can be compared and
// looked up by value.
using Element = std::vector<std::size_t>;

Element flatten(const GroupAction& group, std::size_t g, std::size_t num_states,
                std::size_t num_actions) {
  Element e(group.state_perms[g]);
  e.reserve(num_states + num_states * num_actions);
  for (StateId s = 0; s < num_states; ++s) {
    for (ActionId a = 0; a < num_actions; ++a) {
      e.push_back(group.action_perms.empty() ? a : group.action_perms[g][s][a]);
    }
  }
  return e;
}

// (g ∘ h): s -> L_g[L_h[s]], a at s -> K_g^{L_h s}[K_h^s[a]].
Element compose(const Element& g, const Element& h, std::size_t num_states,
                std::size_t num_actions) {
  Element out(num_states + num_states * num_actions);
  for (StateId s = 0; s < num_states; ++s) {
    const StateId hs = h[s];
    out[s] = g[hs];
    for (ActionId a = 0; a < num_actions; ++a) {
      const ActionId ha = h[num_states + s * num_actions + a];
      out[num_states + s * num_actions + a] = g[num_states + hs * num_actions + ha];
    }
  }
  return out;
}

bool is_permutation_of_range(std::span<const std::size_t> v, std::size_t n) {
  if (v.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t x : v) {
    if (x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

// Class-summed successor mass of (s, a), one entry per abstract state.
std::vector<double> aggregated_row(const Homomorphism& h, const ControlledProcess& p, StateId s,
                                   ActionId a) {
  std::vector<double> row(h.num_abstract_states(), 0.0);
  for (const auto& succ : p.successors(s, a)) row[h.abstract_state(succ.state)] += succ.prob;
  return row;
}

void check_shapes(const Homomorphism& h, const ControlledProcess& p) {
  if (h.num_states() != p.num_states() || h.num_actions() != p.num_actions()) {
    throw HomomorphismError("homomorphism shape does not match the process");
  }
}

}  // namespace

Homomorphism::Homomorphism(std::vector<StateId> state_map,
                           std::vector<std::vector<ActionId>> action_maps)
    : state_map_(std::move(state_map)), action_maps_(std::move(action_maps)) {
  if (state_map_.empty()) throw PartitionError("state map is empty");
  if (action_maps_.size() != state_map_.size()) {
    throw HomomorphismError("need one action map per state");
  }
  num_actions_ = action_maps_.front().size();
  if (num_actions_ == 0) throw HomomorphismError("action maps are empty");

  const StateId max_abstract = *std::max_element(state_map_.begin(), state_map_.end());
  classes_.assign(max_abstract + 1, {});
  for (StateId s = 0; s < state_map_.size(); ++s) classes_[state_map_[s]].push_back(s);
  for (StateId c = 0; c < classes_.size(); ++c) {
    if (classes_[c].empty()) {
      std::ostringstream os;
      os << "state map is not surjective: abstract state " << c << " has no preimage";
      throw PartitionError(os.str());
    }
  }

  for (const auto& phi : action_maps_) {
    if (phi.size() != num_actions_) throw HomomorphismError("action maps have differing sizes");
    num_abstract_actions_ =
        std::max(num_abstract_actions_, *std::max_element(phi.begin(), phi.end()) + 1);
  }
}

Homomorphism Homomorphism::identity(std::size_t num_states, std::size_t num_actions) {
  std::vector<StateId> psi(num_states);
  std::iota(psi.begin(), psi.end(), 0);
  std::vector<ActionId> phi(num_actions);
  std::iota(phi.begin(), phi.end(), 0);
  return Homomorphism(std::move(psi), std::vector<std::vector<ActionId>>(num_states, phi));
}

std::vector<std::size_t> Homomorphism::class_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(classes_.size());
  for (const auto& c : classes_) sizes.push_back(c.size());
  return sizes;
}

std::size_t Homomorphism::preimage_size(StateId s, ActionId abstract_action) const {
  return static_cast<std::size_t>(
      std::count(action_maps_[s].begin(), action_maps_[s].end(), abstract_action));
}

bool Homomorphism::is_identity() const {
  if (num_abstract_states() != num_states() || num_abstract_actions_ != num_actions_) return false;
  for (StateId s = 0; s < num_states(); ++s) {
    if (state_map_[s] != s) return false;
    for (ActionId a = 0; a < num_actions_; ++a) {
      if (action_maps_[s][a] != a) return false;
    }
  }
  return true;
}

Homomorphism from_partition(const ControlledProcess& p,
                            const std::vector<std::vector<StateId>>& classes,
                            const std::vector<std::vector<ActionId>>& action_maps) {
  const std::size_t n = p.num_states();
  constexpr StateId kUnassigned = static_cast<StateId>(-1);
  std::vector<StateId> psi(n, kUnassigned);
  for (StateId c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw PartitionError("partition contains an empty class");
    for (StateId s : classes[c]) {
      if (s >= n) throw PartitionError("partition names a state outside the process");
      if (psi[s] != kUnassigned) {
        std::ostringstream os;
        os << "state " << s << " appears in more than one class";
        throw PartitionError(os.str());
      }
      psi[s] = c;
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (psi[s] == kUnassigned) {
      std::ostringstream os;
      os << "state " << s << " is missing from the partition";
      throw PartitionError(os.str());
    }
  }
  if (action_maps.empty()) {
    std::vector<ActionId> phi(p.num_actions());
    std::iota(phi.begin(), phi.end(), 0);
    return Homomorphism(std::move(psi), std::vector<std::vector<ActionId>>(n, phi));
  }
  if (action_maps.size() != n) throw HomomorphismError("need one action map per state");
  for (const auto& phi : action_maps) {
    if (phi.size() != p.num_actions()) throw HomomorphismError("action map has wrong size");
  }
  return Homomorphism(std::move(psi), action_maps);
}

void check_group_axioms(const GroupAction& group, std::size_t num_states,
                        std::size_t num_actions) {
  if (group.order() == 0) throw GroupStructureError("group has no elements");
  if (!group.action_perms.empty() && group.action_perms.size() != group.order()) {
    throw GroupStructureError("need one action permutation family per group element");
  }
  for (std::size_t g = 0; g < group.order(); ++g) {
    if (!is_permutation_of_range(group.state_perms[g], num_states)) {
      std::ostringstream os;
      os << "element " << g << " is not a bijection on states";
      throw GroupStructureError(os.str());
    }
    if (!group.action_perms.empty()) {
      if (group.action_perms[g].size() != num_states) {
        throw GroupStructureError("action permutations need one entry per state");
      }
      for (StateId s = 0; s < num_states; ++s) {
        if (!is_permutation_of_range(group.action_perms[g][s], num_actions)) {
          std::ostringstream os;
          os << "element " << g << " is not a bijection on actions at state " << s;
          throw GroupStructureError(os.str());
        }
      }
    }
  }

  std::map<Element, std::size_t> index;
  std::vector<Element> elements;
  for (std::size_t g = 0; g < group.order(); ++g) {
    elements.push_back(flatten(group, g, num_states, num_actions));
    index.emplace(elements.back(), g);
  }

  Element identity(num_states + num_states * num_actions);
  std::iota(identity.begin(), identity.begin() + static_cast<long>(num_states), 0);
  for (StateId s = 0; s < num_states; ++s) {
    for (ActionId a = 0; a < num_actions; ++a) identity[num_states + s * num_actions + a] = a;
  }
  if (!index.contains(identity)) throw GroupStructureError("identity element is missing");

  for (std::size_t g = 0; g < elements.size(); ++g) {
    bool has_inverse = false;
    for (std::size_t h = 0; h < elements.size(); ++h) {
      const Element gh = compose(elements[g], elements[h], num_states, num_actions);
      if (!index.contains(gh)) {
        std::ostringstream os;
        os << "composition of elements " << g << " and " << h << " leaves the set";
        throw GroupStructureError(os.str());
      }
      has_inverse = has_inverse || gh == identity;
    }
    if (!has_inverse) {
      std::ostringstream os;
      os << "element " << g << " has no inverse in the set";
      throw GroupStructureError(os.str());
    }
  }
}

std::vector<std::vector<StateId>> orbits(const GroupAction& group, std::size_t num_states) {
  constexpr StateId kUnassigned = static_cast<StateId>(-1);
  std::vector<StateId> orbit_of(num_states, kUnassigned);
  std::vector<std::vector<StateId>> out;
  for (StateId s = 0; s < num_states; ++s) {
    if (orbit_of[s] != kUnassigned) continue;
    std::vector<StateId> orbit;
    for (const auto& perm : group.state_perms) {
      const StateId t = perm[s];
      if (orbit_of[t] == kUnassigned) {
        orbit_of[t] = out.size();
        orbit.push_back(t);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

std::size_t stabilizer_order(const GroupAction& group, StateId s) {
  return static_cast<std::size_t>(std::count_if(group.state_perms.begin(), group.state_perms.end(),
                                                [s](const auto& perm) { return perm[s] == s; }));
}

Homomorphism from_group_action(const ControlledProcess& p, const GroupAction& group) {
  const std::size_t n = p.num_states();
  const std::size_t m = p.num_actions();
  check_group_axioms(group, n, m);

  const auto classes = orbits(group, n);
  std::vector<StateId> psi(n);
  std::vector<std::vector<ActionId>> phi(n, std::vector<ActionId>(m));
  for (StateId c = 0; c < classes.size(); ++c) {
    const StateId rep = classes[c].front();
    std::vector<bool> done(n, false);
    for (std::size_t g = 0; g < group.order(); ++g) {
      const StateId s = group.state_perms[g][rep];
      if (done[s]) continue;
      done[s] = true;
      psi[s] = c;
      for (ActionId a = 0; a < m; ++a) {
        const ActionId image = group.action_perms.empty() ? a : group.action_perms[g][rep][a];
        phi[s][image] = a;
      }
    }
  }
  return Homomorphism(std::move(psi), std::move(phi));
}

std::vector<std::string> validate(const Homomorphism& h, const ControlledProcess& p,
                                  std::optional<std::span<const double>> f) {
  std::vector<std::string> report;
  if (h.num_states() != p.num_states() || h.num_actions() != p.num_actions()) {
    report.emplace_back("homomorphism shape does not match the process");
    return report;
  }

  for (StateId s = 0; s < h.num_states(); ++s) {
    for (ActionId abar = 0; abar < h.num_abstract_actions(); ++abar) {
      if (h.preimage_size(s, abar) == 0) {
        std::ostringstream os;
        os << "action map at state " << s << " misses abstract action " << abar;
        report.push_back(os.str());
      }
    }
  }

  if (f) {
    if (f->size() != h.num_states()) {
      report.emplace_back("state function has wrong length");
    } else {
      for (StateId c = 0; c < h.num_abstract_states(); ++c) {
        const auto& cls = h.members(c);
        const double ref = (*f)[cls.front()];
        for (StateId s : cls) {
          if (!(std::abs((*f)[s] - ref) <= kInvarianceTol)) {
            std::ostringstream os;
            os << "f is not constant on class " << c << ": f(" << cls.front() << ")=" << ref
               << " but f(" << s << ")=" << (*f)[s];
            report.push_back(os.str());
            break;
          }
        }
      }
    }
  }

  const std::size_t num_pairs = h.num_abstract_states() * h.num_abstract_actions();
  std::vector<std::vector<double>> reference(num_pairs);
  std::vector<std::pair<StateId, ActionId>> reference_src(num_pairs);
  for (StateId s = 0; s < p.num_states(); ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const std::size_t key = h.abstract_state(s) * h.num_abstract_actions() + h.abstract_action(s, a);
      auto row = aggregated_row(h, p, s, a);
      if (reference[key].empty()) {
        reference[key] = std::move(row);
        reference_src[key] = {s, a};
        continue;
      }
      for (StateId c = 0; c < row.size(); ++c) {
        if (!(std::abs(row[c] - reference[key][c]) <= kInvarianceTol)) {
          if (report.size() < kMaxReportedViolations) {
            std::ostringstream os;
            os << "dynamics differ for abstract pair (" << h.abstract_state(s) << ", "
               << h.abstract_action(s, a) << "): (s=" << s << ", a=" << a << ") sends "
               << row[c] << " to class " << c << " but (s=" << reference_src[key].first
               << ", a=" << reference_src[key].second << ") sends " << reference[key][c];
            report.push_back(os.str());
          }
          break;
        }
      }
    }
  }
  return report;
}

ControlledProcess abstract_process(const Homomorphism& h, const ControlledProcess& p) {
  check_shapes(h, p);
  const std::size_t nbar = h.num_abstract_states();
  const std::size_t mbar = h.num_abstract_actions();

  std::vector<double> transitions(nbar * mbar * nbar, 0.0);
  std::vector<bool> filled(nbar * mbar, false);
  for (StateId s = 0; s < p.num_states(); ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const std::size_t key = h.abstract_state(s) * mbar + h.abstract_action(s, a);
      const auto row = aggregated_row(h, p, s, a);
      double* dst = transitions.data() + key * nbar;
      if (!filled[key]) {
        // A class sum can overshoot 1 by rounding.
        std::transform(row.begin(), row.end(), dst, [](double x) { return std::min(x, 1.0); });
        filled[key] = true;
        continue;
      }
      for (StateId c = 0; c < nbar; ++c) {
        if (!(std::abs(row[c] - dst[c]) <= kInvarianceTol)) {
          std::ostringstream os;
          os << "representatives disagree on the abstract dynamics of (" << h.abstract_state(s)
             << ", " << h.abstract_action(s, a) << ") at state " << s << ", action " << a;
          throw HomomorphismError(os.str());
        }
      }
    }
  }
  for (std::size_t key = 0; key < filled.size(); ++key) {
    if (!filled[key]) {
      std::ostringstream os;
      os << "abstract pair (" << key / mbar << ", " << key % mbar << ") has no preimage";
      throw HomomorphismError(os.str());
    }
  }

  std::vector<double> mu(nbar, 0.0);
  for (StateId s = 0; s < p.num_states(); ++s) mu[h.abstract_state(s)] += p.initial_dist()[s];

  ControlledProcess abstract(nbar, mbar, std::move(transitions), std::move(mu));
  abstract.ensure_valid();
  return abstract;
}

Policy lift_policy(const Homomorphism& h, const Policy& abstract_policy) {
  if (abstract_policy.num_states() != h.num_abstract_states() ||
      abstract_policy.num_actions() != h.num_abstract_actions()) {
    throw LiftingError("abstract policy shape does not match the homomorphism");
  }
  StateActionTable probs(h.num_states(), h.num_actions());
  for (StateId s = 0; s < h.num_states(); ++s) {
    const StateId sbar = h.abstract_state(s);
    std::vector<std::size_t> preimage(h.num_abstract_actions(), 0);
    for (ActionId a = 0; a < h.num_actions(); ++a) ++preimage[h.abstract_action(s, a)];
    for (ActionId abar = 0; abar < h.num_abstract_actions(); ++abar) {
      if (preimage[abar] == 0 && abstract_policy(sbar, abar) > 0.0) {
        std::ostringstream os;
        os << "abstract action " << abar << " has positive probability but no preimage at state "
           << s;
        throw LiftingError(os.str());
      }
    }
    for (ActionId a = 0; a < h.num_actions(); ++a) {
      const ActionId abar = h.abstract_action(s, a);
      probs(s, a) = abstract_policy(sbar, abar) / static_cast<double>(preimage[abar]);
    }
  }
  return Policy(std::move(probs));
}

StateActionTable aggregate_table(const Homomorphism& h, const StateActionTable& table) {
  StateActionTable out(h.num_abstract_states(), h.num_abstract_actions());
  for (StateId s = 0; s < h.num_states(); ++s) {
    for (ActionId a = 0; a < h.num_actions(); ++a) {
      out(h.abstract_state(s), h.abstract_action(s, a)) += table(s, a);
    }
  }
  return out;
}

StateActionTable expand_table(const Homomorphism& h, const StateActionTable& abstract_table) {
  StateActionTable out(h.num_states(), h.num_actions());
  for (StateId s = 0; s < h.num_states(); ++s) {
    for (ActionId a = 0; a < h.num_actions(); ++a) {
      out(s, a) = abstract_table(h.abstract_state(s), h.abstract_action(s, a));
    }
  }
  return out;
}

double compression(const Homomorphism& h) {
  return static_cast<double>(h.num_abstract_states()) / static_cast<double>(h.num_states());
}

double compression_via_group(std::size_t group_order, std::size_t stabilizer_order) {
  if (group_order == 0 || stabilizer_order == 0) {
    throw ArithmeticError("group and stabilizer orders must be positive");
  }
  if (group_order % stabilizer_order != 0) {
    std::ostringstream os;
    os << "stabilizer order " << stabilizer_order << " does not divide group order "
       << group_order;
    throw ArithmeticError(os.str());
  }
  return static_cast<double>(stabilizer_order) / static_cast<double>(group_order);
}

bool check_homogeneous(const Homomorphism& h) {
  const auto sizes = h.class_sizes();
  return std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) == sizes.end();
}

}  // namespace gae
