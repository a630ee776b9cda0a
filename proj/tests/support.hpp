#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "gae/homomorphism.hpp"
#include "gae/process.hpp"

namespace gae::testing {

inline ControlledProcess make_process(std::size_t n, std::size_t m, std::vector<double> transitions,
                                      std::vector<double> initial = {}) {
  if (initial.empty()) initial.assign(n, 1.0 / static_cast<double>(n));
  return ControlledProcess(n, m, std::move(transitions), std::move(initial));
}

inline std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> exp(1.0);
  std::vector<double> w(n);
  for (double& x : w) x = exp(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

/// Random CMP whose uniform-policy chain is ergodic: action 0 always moves
/// s -> s+1 with positive probability and every row keeps a self-loop.
inline ControlledProcess random_ergodic_process(std::size_t n, std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(n * m * n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < m; ++a) {
      double* row = t.data() + (s * m + a) * n;
      for (StateId x = 0; x < n; ++x) row[x] = unit(rng) < 0.5 ? unit(rng) : 0.0;
      row[s] += 0.1 + unit(rng);
      if (a == 0) row[(s + 1) % n] += 0.5;
      const double total = std::accumulate(row, row + n, 0.0);
      for (StateId x = 0; x < n; ++x) row[x] /= total;
    }
  }
  return make_process(n, m, std::move(t), random_simplex(n, rng));
}

/// A CMP invariant under the cyclic group Z_B acting on states (o, r) ->
/// (o, r + g) and on actions by the g-th power of a shift on the action
/// set (the identity when `permute_actions` is false or A does not divide B).
struct SymmetricProcess {
  ControlledProcess process;
  GroupAction group;
  std::vector<double> f;
  std::size_t orbits = 0;
  std::size_t block = 0;
};

inline StateId orbit_state(std::size_t orbit, std::size_t r, std::size_t block) {
  return orbit * block + r;
}

inline SymmetricProcess random_symmetric_process(std::size_t orbits, std::size_t block,
                                                 std::size_t m, bool permute_actions, Rng& rng) {
  const std::size_t n = orbits * block;
  const bool shift = permute_actions && block % m == 0;
  const auto sigma = [&](std::size_t g, ActionId a) -> ActionId { return shift ? (a + g) % m : a; };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(n * m * n, 0.0);
  for (std::size_t o = 0; o < orbits; ++o) {
    // Rows of the orbit representative (o, 0), then their images.
    std::vector<std::vector<double>> base(m, std::vector<double>(n, 0.0));
    for (ActionId a = 0; a < m; ++a) {
      auto& row = base[a];
      for (StateId x = 0; x < n; ++x) row[x] = unit(rng) < 0.6 ? unit(rng) : 0.0;
      row[orbit_state(o, 0, block)] += 0.2;
      row[orbit_state((o + 1) % orbits, 0, block)] += 0.3;
      if (block > 1) row[orbit_state(o, 1, block)] += 0.3;
      const double total = std::accumulate(row.begin(), row.end(), 0.0);
      for (double& x : row) x /= total;
    }
    for (std::size_t g = 0; g < block; ++g) {
      const StateId s = orbit_state(o, g, block);
      for (ActionId a = 0; a < m; ++a) {
        double* row = t.data() + (s * m + sigma(g, a)) * n;
        for (std::size_t o2 = 0; o2 < orbits; ++o2) {
          for (std::size_t r = 0; r < block; ++r) {
            row[orbit_state(o2, (r + g) % block, block)] = base[a][orbit_state(o2, r, block)];
          }
        }
      }
    }
  }

  GroupAction group;
  for (std::size_t g = 0; g < block; ++g) {
    std::vector<StateId> perm(n);
    std::vector<std::vector<ActionId>> actions(n, std::vector<ActionId>(m));
    for (std::size_t o = 0; o < orbits; ++o) {
      for (std::size_t r = 0; r < block; ++r) {
        const StateId s = orbit_state(o, r, block);
        perm[s] = orbit_state(o, (r + g) % block, block);
        for (ActionId a = 0; a < m; ++a) actions[s][a] = sigma(g, a);
      }
    }
    group.state_perms.push_back(std::move(perm));
    group.action_perms.push_back(std::move(actions));
  }

  std::vector<double> f(n);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (std::size_t o = 0; o < orbits; ++o) {
    const double v = value(rng);
    for (std::size_t r = 0; r < block; ++r) f[orbit_state(o, r, block)] = v;
  }
  return {make_process(n, m, std::move(t), random_simplex(n, rng)), std::move(group), std::move(f),
          orbits, block};
}

}  // namespace gae::testing
