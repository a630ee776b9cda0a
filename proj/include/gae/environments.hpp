#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gae/homomorphism.hpp"
#include "gae/process.hpp"

namespace gae {

/// A controlled process together with the unknown quantity f, its
/// heteroscedastic Gaussian noise and the named homomorphisms that encode
/// known invariances of f and P.
struct Environment {
  std::string name;
  ControlledProcess process;
  std::vector<double> f;
  std::vector<double> sigma;
  std::vector<std::string> state_labels;
  double f_max = 0.0;
  /// Clamp observations to [0, f_max]. Off reproduces raw Gaussian draws.
  bool clamp = true;
  std::vector<std::pair<std::string, Homomorphism>> homomorphisms;
  /// Symmetry group of (f, P), when one is known.
  std::optional<GroupAction> symmetry;

  std::size_t num_states() const noexcept { return process.num_states(); }
  double sigma2_max() const;

  /// Named homomorphism; "identity" is always available. Throws ConfigError
  /// for unknown names.
  Homomorphism homomorphism(const std::string& name) const;
  std::vector<std::string> homomorphism_names() const;
};

enum class DiffusionDynamics { kDeterministic, kStochastic };

enum DiffusionAction : ActionId { kIn = 0, kOut = 1, kClockwise = 2, kAnticlockwise = 3, kStay = 4 };

struct DiffusionOptions {
  std::size_t radii = 30;
  std::size_t rays = 8;
  DiffusionDynamics dynamics = DiffusionDynamics::kDeterministic;
  double q = 0.98;  // probability of the intended move in stochastic mode
  bool clamp = true;
};

/// Radial measurement grid around a point source. State k * rays + j sits on
/// circle k (0 innermost) and ray j. Moves that would leave the grid radially
/// self-loop; rays wrap around. f(k) = 9300 - 300k, σ(k) = 3100 - 100k.
/// Homomorphisms: h3 merges every ray, h2 merges rays j ~ j + rays/4, h1
/// merges rays j ~ j + rays/2 (when the ray count allows).
Environment diffusion_env(const DiffusionOptions& options = {});

/// State id of circle k, ray j.
inline StateId diffusion_state(std::size_t circle, std::size_t ray, std::size_t rays) {
  return circle * rays + ray;
}

/// Rotations of the diffusion grid by multiples of `step` rays.
GroupAction diffusion_rotations(std::size_t radii, std::size_t rays, std::size_t step = 1);

struct StringsOptions {
  std::size_t alphabet = 3;
  std::size_t max_len = 5;
  bool clamp = true;
};

/// Compounds as non-empty strings over the first `alphabet` capital letters,
/// up to max_len characters, ordered by length then lexicographically.
/// Actions append a letter (restart from that single letter at full length)
/// or stay. The i-th letter adds 200(i+1) to f and 100(i+1) to σ. The
/// "permutation" homomorphism merges strings with equal letter multisets.
Environment strings_env(const StringsOptions& options = {});

/// x = f(s) + σ(s) z, z ~ N(0,1), clamped to [0, f_max] when env.clamp.
double sample_observation(const Environment& env, StateId s, Rng& rng);

}  // namespace gae
