#include "gae/exploration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gae/errors.hpp"
#include "gae/objective.hpp"

namespace gae {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void require_valid(const Homomorphism& h, const Environment& env, const char* role) {
  const auto report = validate(h, env.process, std::span<const double>(env.f));
  if (report.empty()) return;
  std::ostringstream os;
  os << role << " homomorphism is not valid for environment '" << env.name << "':";
  for (const auto& line : report) os << "\n  " << line;
  throw HomomorphismError(os.str());
}

std::vector<double> class_variance(const Environment& env, const Homomorphism& h) {
  std::vector<double> out(h.num_abstract_states());
  for (StateId c = 0; c < out.size(); ++c) {
    const double sd = env.sigma[h.members(c).front()];
    out[c] = sd * sd;
  }
  return out;
}

std::vector<double> row_mass(const StateActionTable& t) {
  std::vector<double> out(t.num_states(), 0.0);
  for (StateId s = 0; s < t.num_states(); ++s) {
    for (double x : t.row(s)) out[s] += x;
  }
  return out;
}

}  // namespace

void GaeConfig::check() const {
  if (budget < 1) throw ParameterError("budget must be at least one step");
  if (schedule == ScheduleMode::kConstant && tau < 1) throw ParameterError("tau must be >= 1");
  if (!(eta > 0.0)) throw ParameterError("smoothing eta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("confidence delta must lie in (0,1)");
  if (lambda_update == LambdaUpdate::kConstantStep && !(step_constant > 0.0)) {
    throw ParameterError("constant update step must be positive");
  }
  planner.check();
}

std::uint64_t interactions(const GaeConfig& cfg, std::uint64_t k) {
  if (cfg.schedule == ScheduleMode::kConstant) return cfg.tau;
  return 3 * k * k - 3 * k + 1;
}

std::vector<std::uint64_t> iteration_ends(const GaeConfig& cfg) {
  std::vector<std::uint64_t> ends;
  std::uint64_t t = 0;
  for (std::uint64_t k = 1; t < cfg.budget; ++k) {
    t = std::min(cfg.budget, t + interactions(cfg, k));
    ends.push_back(t);
  }
  return ends;
}

RunResult run_exploration(const Environment& env, const Homomorphism& plan,
                          const Homomorphism& evaluate, const GaeConfig& cfg) {
  cfg.check();
  const auto& p = env.process;
  require_valid(plan, env, "planning");
  require_valid(evaluate, env, "evaluation");
  if (const auto ergodic = check_ergodicity(p); !ergodic.ergodic) {
    throw ErgodicityError("environment '" + env.name + "' is not ergodic: " + ergodic.diagnostic);
  }

  const auto run_start = Clock::now();
  const ControlledProcess abstract = abstract_process(plan, p);
  const std::size_t nbar = abstract.num_states();
  const std::size_t mbar = abstract.num_actions();
  const ObjectiveParams params = ObjectiveParams::from(plan, cfg.eta, cfg.delta, env.f_max);
  const auto true_variance = class_variance(env, plan);

  StateActionTable lambda_bar(nbar, mbar, 1.0 / static_cast<double>(nbar * mbar));
  EstimatorState estimator(p.num_states(), p.num_actions());
  Rng rng(cfg.seed);
  StateId state = sample_initial(p, rng);

  RunResult result{.trace = {}, .estimates = {}, .estimator = estimator};
  result.trace.seed = cfg.seed;
  result.trace.compression = compression(plan);

  std::vector<double> variance(nbar), bonus(nbar);
  std::uint64_t t = 0;
  for (std::uint64_t k = 1; t < cfg.budget; ++k) {
    // Optimistic gradient at t_k - 1 = t samples. With no samples yet the
    // log term is evaluated at t = 1.
    for (StateId c = 0; c < nbar; ++c) {
      variance[c] = abstract_variance(estimator, plan, c, cfg.class_count);
      bonus[c] = variance_bonus(std::max<std::uint64_t>(t, 1), nbar, cfg.delta, env.f_max,
                                class_count_plus(estimator, plan, c, cfg.class_count));
    }
    const StateActionTable gradient = abstract_reward(lambda_bar, variance, bonus, params);
    if (!gradient_invariance_check(expand_table(plan, gradient), plan)) {
      throw HomomorphismError("abstract gradient is not constant on equivalence classes");
    }

    // The linear subproblem minimises <gradient, λ̄>; the planner maximises,
    // so it receives the negated gradient.
    StateActionTable planner_reward = gradient;
    for (double& x : planner_reward.data()) x = -x;

    const auto plan_start = Clock::now();
    const PlannerResult solved = value_iteration(abstract, planner_reward, cfg.planner);
    const double planner_ms = cfg.record_timing ? elapsed_ms(plan_start) : 0.0;

    const Policy policy = lift_policy(plan, solved.policy);
    const std::uint64_t steps = std::min(interactions(cfg, k), cfg.budget - t);
    StateActionTable visits(p.num_states(), p.num_actions());
    for (std::uint64_t i = 0; i < steps; ++i) {
      const ActionId action = policy.sample(state, rng);
      estimator.record(state, action, sample_observation(env, state, rng));
      visits(state, action) += 1.0;
      state = step(p, state, action, rng);
    }
    const std::uint64_t t_prev = t;
    t += steps;

    StateActionTable visits_bar = aggregate_table(plan, visits);
    for (double& x : visits_bar.data()) x /= static_cast<double>(steps);

    if (cfg.lambda_update == LambdaUpdate::kMixture) {
      for (std::size_t i = 0; i < lambda_bar.data().size(); ++i) {
        lambda_bar.data()[i] = (static_cast<double>(steps) * visits_bar.data()[i] +
                                static_cast<double>(t_prev) * lambda_bar.data()[i]) /
                               static_cast<double>(t);
      }
    } else {
      const double c = cfg.step_constant / static_cast<double>(nbar);
      double total = 0.0;
      for (std::size_t i = 0; i < lambda_bar.data().size(); ++i) {
        lambda_bar.data()[i] += c * visits_bar.data()[i];
        total += lambda_bar.data()[i];
      }
      for (double& x : lambda_bar.data()) x /= total;
    }

    IterationRecord record;
    record.k = k;
    record.t = t;
    record.xi_geo = geometric_error(estimator, evaluate, env.f, cfg.class_count);
    record.xi_classic = classic_error(estimator, env.f);
    record.objective = objective_value(row_mass(lambda_bar), true_variance, params);
    record.planner_ms = planner_ms;
    result.trace.records.push_back(record);
  }

  result.estimates.resize(p.num_states());
  for (StateId s = 0; s < p.num_states(); ++s) {
    result.estimates[s] = cfg.inference == InferenceMode::kAggregated
                              ? aggregated_mean(estimator, evaluate, s, cfg.class_count)
                              : empirical_mean(estimator, s);
  }
  result.trace.final_counts.resize(p.num_states());
  for (StateId s = 0; s < p.num_states(); ++s) result.trace.final_counts[s] = estimator.count(s);
  result.trace.total_ms = cfg.record_timing ? elapsed_ms(run_start) : 0.0;
  result.estimator = std::move(estimator);
  return result;
}

RunResult run_gae(const Environment& env, const Homomorphism& h, const GaeConfig& cfg) {
  return run_exploration(env, h, h, cfg);
}

RunResult run_ae(const Environment& env, const GaeConfig& cfg) {
  const auto identity = Homomorphism::identity(env.num_states(), env.process.num_actions());
  return run_exploration(env, identity, identity, cfg);
}

RunResult run_inference_bias_ablation(const Environment& env, const Homomorphism& h,
                                      const GaeConfig& cfg) {
  GaeConfig ablated = cfg;
  ablated.inference = InferenceMode::kClassic;
  const auto identity = Homomorphism::identity(env.num_states(), env.process.num_actions());
  return run_exploration(env, identity, h, ablated);
}

double error_at(const RunTrace& trace, std::uint64_t t, double initial_error, bool geometric) {
  double value = initial_error;
  for (const auto& r : trace.records) {
    if (r.t > t) break;
    value = geometric ? r.xi_geo : r.xi_classic;
  }
  return value;
}

std::optional<std::uint64_t> measure_sample_complexity(const Environment& env,
                                                       const Homomorphism& h,
                                                       const GaeConfig& cfg, double epsilon,
                                                       std::size_t repeats,
                                                       std::span<const std::uint64_t> checkpoints) {
  if (repeats < 1) throw ParameterError("sample complexity needs at least one repeat");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw ParameterError("checkpoints must be increasing");
  }

  double initial_error = 0.0;
  for (double v : env.f) initial_error += std::abs(v);
  initial_error /= static_cast<double>(env.num_states());

  std::vector<RunTrace> traces;
  traces.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    GaeConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + r;
    traces.push_back(run_gae(env, h, run_cfg).trace);
  }

  const double required = (1.0 - cfg.delta) * static_cast<double>(repeats);
  for (std::uint64_t c : checkpoints) {
    std::size_t hits = 0;
    for (const auto& trace : traces) {
      if (error_at(trace, c, initial_error) <= epsilon) ++hits;
    }
    if (static_cast<double>(hits) >= required) return c;
  }
  return std::nullopt;
}

}  // namespace gae
