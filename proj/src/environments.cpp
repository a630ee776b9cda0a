#include "gae/environments.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "gae/errors.hpp"

namespace gae {

namespace {

constexpr double kClampSigmas = 5.0;

double observation_bound(const std::vector<double>& f, const std::vector<double>& sigma) {
  return *std::max_element(f.begin(), f.end()) +
         kClampSigmas * *std::max_element(sigma.begin(), sigma.end());
}

}  // namespace

double Environment::sigma2_max() const {
  const double s = *std::max_element(sigma.begin(), sigma.end());
  return s * s;
}

Homomorphism Environment::homomorphism(const std::string& wanted) const {
  if (wanted == "identity") return Homomorphism::identity(num_states(), process.num_actions());
  for (const auto& [label, h] : homomorphisms) {
    if (label == wanted) return h;
  }
  std::string known = "identity";
  for (const auto& entry : homomorphisms) known += ", " + entry.first;
  throw ConfigError("environment '" + name + "' has no homomorphism '" + wanted +
                    "' (known: " + known + ")");
}

std::vector<std::string> Environment::homomorphism_names() const {
  std::vector<std::string> out{"identity"};
  for (const auto& entry : homomorphisms) out.push_back(entry.first);
  return out;
}

GroupAction diffusion_rotations(std::size_t radii, std::size_t rays, std::size_t step) {
  if (step == 0 || rays % step != 0) throw ParameterError("rotation step must divide the ray count");
  GroupAction group;
  for (std::size_t shift = 0; shift < rays; shift += step) {
    std::vector<StateId> perm(radii * rays);
    for (std::size_t k = 0; k < radii; ++k) {
      for (std::size_t j = 0; j < rays; ++j) {
        perm[diffusion_state(k, j, rays)] = diffusion_state(k, (j + shift) % rays, rays);
      }
    }
    group.state_perms.push_back(std::move(perm));
  }
  return group;
}

Environment diffusion_env(const DiffusionOptions& options) {
  const std::size_t radii = options.radii;
  const std::size_t rays = options.rays;
  if (radii == 0 || rays == 0) throw ParameterError("diffusion grid needs radii >= 1 and rays >= 1");
  if (options.dynamics == DiffusionDynamics::kStochastic && !(options.q > 0.0 && options.q <= 1.0)) {
    throw ParameterError("stochastic diffusion needs q in (0,1]");
  }
  const std::size_t n = radii * rays;
  constexpr std::size_t kActions = 5;

  std::vector<double> transitions(n * kActions * n, 0.0);
  for (std::size_t k = 0; k < radii; ++k) {
    for (std::size_t j = 0; j < rays; ++j) {
      const StateId s = diffusion_state(k, j, rays);
      const std::array<StateId, kActions> target{
          diffusion_state(k == 0 ? 0 : k - 1, j, rays),
          diffusion_state(k + 1 == radii ? k : k + 1, j, rays),
          diffusion_state(k, (j + 1) % rays, rays),
          diffusion_state(k, (j + rays - 1) % rays, rays),
          s,
      };
      const std::set<StateId> reachable(target.begin(), target.end());
      for (ActionId a = 0; a < kActions; ++a) {
        double* row = transitions.data() + (s * kActions + a) * n;
        if (options.dynamics == DiffusionDynamics::kDeterministic || reachable.size() == 1) {
          row[target[a]] = 1.0;
          continue;
        }
        const double slip = (1.0 - options.q) / static_cast<double>(reachable.size() - 1);
        for (StateId t : reachable) row[t] = t == target[a] ? options.q : slip;
      }
    }
  }

  std::vector<double> mu(n, 0.0);
  mu[diffusion_state(radii - 1, 0, rays)] = 1.0;

  std::vector<double> f(n), sigma(n);
  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < radii; ++k) {
    for (std::size_t j = 0; j < rays; ++j) {
      const StateId s = diffusion_state(k, j, rays);
      f[s] = 9300.0 - 300.0 * static_cast<double>(k);
      sigma[s] = 3100.0 - 100.0 * static_cast<double>(k);
      labels[s] = "c" + std::to_string(k) + "r" + std::to_string(j);
    }
  }

  Environment env{
      .name = options.dynamics == DiffusionDynamics::kDeterministic ? "diffusion"
                                                                    : "diffusion-stochastic",
      .process = ControlledProcess(n, kActions, std::move(transitions), std::move(mu)),
      .f = std::move(f),
      .sigma = std::move(sigma),
      .state_labels = std::move(labels),
      .f_max = 0.0,
      .clamp = options.clamp,
      .homomorphisms = {},
      .symmetry = diffusion_rotations(radii, rays),
  };
  env.f_max = observation_bound(env.f, env.sigma);

  if (rays % 2 == 0) {
    env.homomorphisms.emplace_back(
        "h1", from_group_action(env.process, diffusion_rotations(radii, rays, rays / 2)));
  }
  if (rays % 4 == 0) {
    env.homomorphisms.emplace_back(
        "h2", from_group_action(env.process, diffusion_rotations(radii, rays, rays / 4)));
  }
  env.homomorphisms.emplace_back("h3", from_group_action(env.process, *env.symmetry));
  return env;
}

Environment strings_env(const StringsOptions& options) {
  if (options.alphabet == 0 || options.max_len == 0) {
    throw ParameterError("strings environment needs alphabet >= 1 and max_len >= 1");
  }
  if (options.alphabet > 26) throw ParameterError("alphabet is limited to 26 letters");
  const std::size_t letters = options.alphabet;

  std::vector<std::string> labels;
  std::vector<std::string> layer{""};
  for (std::size_t len = 1; len <= options.max_len; ++len) {
    std::vector<std::string> next;
    next.reserve(layer.size() * letters);
    for (const auto& prefix : layer) {
      for (std::size_t c = 0; c < letters; ++c) next.push_back(prefix + static_cast<char>('A' + c));
    }
    labels.insert(labels.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  const std::size_t n = labels.size();
  std::map<std::string, StateId> index;
  for (StateId s = 0; s < n; ++s) index.emplace(labels[s], s);

  const std::size_t num_actions = letters + 1;
  const ActionId stay = letters;
  std::vector<double> transitions(n * num_actions * n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < num_actions; ++a) {
      StateId target = s;
      if (a != stay) {
        const char letter = static_cast<char>('A' + a);
        target = labels[s].size() < options.max_len ? index.at(labels[s] + letter)
                                                    : index.at(std::string(1, letter));
      }
      transitions[(s * num_actions + a) * n + target] = 1.0;
    }
  }

  std::vector<double> mu(n, 0.0);
  mu[index.at("A")] = 1.0;

  std::vector<double> f(n, 0.0), sigma(n, 0.0);
  std::map<std::string, StateId> class_of;
  std::vector<std::vector<StateId>> classes;
  for (StateId s = 0; s < n; ++s) {
    for (char ch : labels[s]) {
      const double weight = static_cast<double>(ch - 'A' + 1);
      f[s] += 200.0 * weight;
      sigma[s] += 100.0 * weight;
    }
    std::string key = labels[s];
    std::sort(key.begin(), key.end());
    const auto [it, inserted] = class_of.emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(s);
  }

  Environment env{
      .name = "strings",
      .process = ControlledProcess(n, num_actions, std::move(transitions), std::move(mu)),
      .f = std::move(f),
      .sigma = std::move(sigma),
      .state_labels = std::move(labels),
      .f_max = 0.0,
      .clamp = options.clamp,
      .homomorphisms = {},
      .symmetry = std::nullopt,
  };
  env.f_max = observation_bound(env.f, env.sigma);
  env.homomorphisms.emplace_back("permutation", from_partition(env.process, classes));
  return env;
}

double sample_observation(const Environment& env, StateId s, Rng& rng) {
  if (s >= env.num_states()) throw IndexError("state index out of range");
  std::normal_distribution<double> noise(0.0, 1.0);
  const double x = env.f[s] + env.sigma[s] * noise(rng);
  return env.clamp ? std::clamp(x, 0.0, env.f_max) : x;
}

}  // namespace gae
