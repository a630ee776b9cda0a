#include "gae/process.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "gae/errors.hpp"

namespace gae {

namespace {

// Direct solve up to this many state-action entries, power iteration above.
constexpr std::size_t kDirectSolveLimit = 10'000;
constexpr double kPowerResidual = 1e-10;
constexpr std::size_t kPowerMaxIterations = 1'000'000;

std::vector<std::vector<StateId>> support_graph(const std::vector<double>& chain, std::size_t n) {
  std::vector<std::vector<StateId>> adj(n);
  for (StateId s = 0; s < n; ++s) {
    for (StateId t = 0; t < n; ++t) {
      if (chain[s * n + t] > 0.0) adj[s].push_back(t);
    }
  }
  return adj;
}

std::vector<long> bfs_levels(const std::vector<std::vector<StateId>>& adj, StateId root) {
  std::vector<long> level(adj.size(), -1);
  std::queue<StateId> frontier;
  level[root] = 0;
  frontier.push(root);
  while (!frontier.empty()) {
    const StateId u = frontier.front();
    frontier.pop();
    for (StateId v : adj[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

ErgodicityReport analyse_chain(const std::vector<double>& chain, std::size_t n) {
  ErgodicityReport report;
  if (n == 0) {
    report.diagnostic = "empty state space";
    return report;
  }
  const auto adj = support_graph(chain, n);
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId u = 0; u < n; ++u) {
    for (StateId v : adj[u]) reverse[v].push_back(u);
  }

  const auto forward = bfs_levels(adj, 0);
  const auto backward = bfs_levels(reverse, 0);
  for (StateId s = 0; s < n; ++s) {
    if (forward[s] < 0 || backward[s] < 0) {
      std::ostringstream os;
      os << "reducible: state " << s << (forward[s] < 0 ? " is unreachable from" : " cannot reach")
         << " state 0";
      report.diagnostic = os.str();
      return report;
    }
  }
  report.irreducible = true;

  // For an irreducible chain the period is the gcd of level[u] + 1 - level[v]
  // over all edges u -> v of a BFS layering.
  long g = 0;
  for (StateId u = 0; u < n; ++u) {
    for (StateId v : adj[u]) g = std::gcd(g, std::labs(forward[u] + 1 - forward[v]));
  }
  report.period = static_cast<std::size_t>(g);
  report.ergodic = report.period == 1;
  if (!report.ergodic) {
    std::ostringstream os;
    os << "periodic with period " << report.period;
    report.diagnostic = os.str();
  } else {
    report.diagnostic = "irreducible and aperiodic";
  }
  return report;
}

std::vector<double> solve_direct(const std::vector<double>& chain, std::size_t n) {
  // d^T (M - I) = 0 with the last equation replaced by sum(d) = 1.
  Eigen::MatrixXd system(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      system(i, j) = chain[j * n + i] - (i == j ? 1.0 : 0.0);
    }
  }
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd d = system.fullPivLu().solve(rhs);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, d(i));
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= total;
  return out;
}

// With `lazy` the iteration runs on 0.5 (M + I), which has the same
// stationary law and is aperiodic.
std::vector<double> solve_power(const ControlledProcess& p, const Policy& pi, bool lazy = false) {
  const std::size_t n = p.num_states();
  std::vector<double> d(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double residual = 0.0;
  const double move = lazy ? 0.5 : 1.0;
  for (std::size_t it = 0; it < kPowerMaxIterations; ++it) {
    for (StateId s = 0; s < n; ++s) next[s] = (1.0 - move) * d[s];
    for (StateId s = 0; s < n; ++s) {
      for (ActionId a = 0; a < p.num_actions(); ++a) {
        const double w = move * d[s] * pi(s, a);
        if (w == 0.0) continue;
        for (const auto& succ : p.successors(s, a)) next[succ.state] += w * succ.prob;
      }
    }
    residual = 0.0;
    for (StateId s = 0; s < n; ++s) residual = std::max(residual, std::abs(next[s] - d[s]));
    d.swap(next);
    if (residual <= kPowerResidual) return d;
  }
  throw ConvergenceError("power iteration for the stationary distribution did not converge",
                         residual);
}

// Strongly connected components with no edge leaving them (Kosaraju).
std::vector<std::vector<StateId>> closed_classes(const std::vector<std::vector<StateId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId u = 0; u < n; ++u) {
    for (StateId v : adj[u]) reverse[v].push_back(u);
  }
  std::vector<StateId> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (StateId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < adj[u].size()) {
        const StateId v = adj[u][i++];
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<long> component(n, -1);
  std::vector<std::vector<StateId>> components;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[*it] >= 0) continue;
    const long id = static_cast<long>(components.size());
    components.emplace_back();
    std::vector<StateId> stack{*it};
    component[*it] = id;
    while (!stack.empty()) {
      const StateId u = stack.back();
      stack.pop_back();
      components.back().push_back(u);
      for (StateId v : reverse[u]) {
        if (component[v] < 0) {
          component[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<std::vector<StateId>> closed;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool leaves = false;
    for (StateId u : components[c]) {
      for (StateId v : adj[u]) leaves = leaves || component[v] != static_cast<long>(c);
    }
    if (!leaves) {
      std::sort(components[c].begin(), components[c].end());
      closed.push_back(std::move(components[c]));
    }
  }
  return closed;
}

}  // namespace

StateActionTable::StateActionTable(std::size_t num_states, std::size_t num_actions,
                                   std::vector<double> data)
    : num_states_(num_states), num_actions_(num_actions), data_(std::move(data)) {
  if (data_.size() != num_states_ * num_actions_) {
    throw ParameterError("state-action table has wrong number of entries");
  }
}

Policy Policy::uniform(std::size_t num_states, std::size_t num_actions) {
  return Policy(StateActionTable(num_states, num_actions, 1.0 / static_cast<double>(num_actions)));
}

Policy Policy::deterministic(std::span<const ActionId> actions, std::size_t num_actions) {
  StateActionTable t(actions.size(), num_actions);
  for (StateId s = 0; s < actions.size(); ++s) {
    if (actions[s] >= num_actions) throw IndexError("deterministic policy action out of range");
    t(s, actions[s]) = 1.0;
  }
  return Policy(std::move(t));
}

std::vector<std::string> Policy::violations(double tol) const {
  std::vector<std::string> out;
  for (StateId s = 0; s < num_states(); ++s) {
    double sum = 0.0;
    bool negative = false;
    for (double x : row(s)) {
      sum += x;
      negative = negative || x < 0.0;
    }
    if (negative || std::abs(sum - 1.0) > tol) {
      std::ostringstream os;
      os << "policy row " << s << " sums to " << sum << (negative ? " with negative entries" : "");
      out.push_back(os.str());
    }
  }
  return out;
}

ActionId Policy::sample(StateId s, Rng& rng) const {
  const auto probs = row(s);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  ActionId last_positive = 0;
  for (ActionId a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    acc += probs[a];
    last_positive = a;
    if (u < acc) return a;
  }
  return last_positive;
}

std::vector<double> StateActionDistribution::state_marginal() const {
  std::vector<double> out(num_states(), 0.0);
  for (StateId s = 0; s < num_states(); ++s) {
    for (double x : mass_.row(s)) out[s] += x;
  }
  return out;
}

double StateActionDistribution::total_mass() const {
  return std::accumulate(mass_.data().begin(), mass_.data().end(), 0.0);
}

ControlledProcess::ControlledProcess(std::size_t num_states, std::size_t num_actions,
                                     std::vector<double> transitions,
                                     std::vector<double> initial_dist)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      initial_(std::move(initial_dist)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw ParameterError("controlled process needs at least one state and one action");
  }
  if (transitions_.size() != num_states_ * num_actions_ * num_states_) {
    throw ParameterError("transition tensor must have S*A*S entries");
  }
  if (initial_.size() != num_states_) {
    throw ParameterError("initial distribution must have S entries");
  }
  sparse_offsets_.reserve(num_states_ * num_actions_ + 1);
  sparse_offsets_.push_back(0);
  for (std::size_t row = 0; row < num_states_ * num_actions_; ++row) {
    for (StateId t = 0; t < num_states_; ++t) {
      const double prob = transitions_[row * num_states_ + t];
      if (prob != 0.0) sparse_.push_back({t, prob});
    }
    sparse_offsets_.push_back(sparse_.size());
  }
}

std::span<const ControlledProcess::Successor> ControlledProcess::successors(StateId s,
                                                                             ActionId a) const {
  const std::size_t row = s * num_actions_ + a;
  return {sparse_.data() + sparse_offsets_[row], sparse_offsets_[row + 1] - sparse_offsets_[row]};
}

void ControlledProcess::ensure_valid() const {
  const auto report = validate_process(*this);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid controlled process:";
  for (const auto& line : report) os << "\n  " << line;
  throw ParameterError(os.str());
}

std::vector<std::string> validate_process(const ControlledProcess& p) {
  std::vector<std::string> report;
  for (StateId s = 0; s < p.num_states(); ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      double sum = 0.0;
      bool out_of_range = false;
      for (double x : p.row(s, a)) {
        sum += x;
        out_of_range = out_of_range || !(x >= 0.0 && x <= 1.0);
      }
      if (out_of_range) {
        std::ostringstream os;
        os << "row (s=" << s << ", a=" << a << ") has entries outside [0,1]";
        report.push_back(os.str());
      }
      if (!(std::abs(sum - 1.0) <= kConstructionTol)) {
        std::ostringstream os;
        os << "row (s=" << s << ", a=" << a << ") sums to " << sum;
        report.push_back(os.str());
      }
    }
  }
  double mu_sum = 0.0;
  bool mu_negative = false;
  for (double x : p.initial_dist()) {
    mu_sum += x;
    mu_negative = mu_negative || x < 0.0;
  }
  if (mu_negative || !(std::abs(mu_sum - 1.0) <= kConstructionTol)) {
    std::ostringstream os;
    os << "initial distribution sums to " << mu_sum << (mu_negative ? " with negative entries" : "");
    report.push_back(os.str());
  }
  return report;
}

StateId step(const ControlledProcess& p, StateId s, ActionId a, Rng& rng) {
  if (s >= p.num_states()) throw IndexError("state index out of range");
  if (a >= p.num_actions()) throw IndexError("action index out of range");
  const auto succ = p.successors(s, a);
  if (succ.size() == 1) return succ.front().state;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (const auto& e : succ) {
    acc += e.prob;
    if (u < acc) return e.state;
  }
  return succ.back().state;
}

StateId sample_initial(const ControlledProcess& p, Rng& rng) {
  const auto& mu = p.initial_dist();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  StateId last_positive = 0;
  for (StateId s = 0; s < mu.size(); ++s) {
    if (mu[s] <= 0.0) continue;
    acc += mu[s];
    last_positive = s;
    if (u < acc) return s;
  }
  return last_positive;
}

std::vector<double> induced_chain(const ControlledProcess& p, const Policy& pi) {
  const std::size_t n = p.num_states();
  if (pi.num_states() != n || pi.num_actions() != p.num_actions()) {
    throw ParameterError("policy shape does not match the process");
  }
  std::vector<double> chain(n * n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const double w = pi(s, a);
      if (w == 0.0) continue;
      for (const auto& succ : p.successors(s, a)) chain[s * n + succ.state] += w * succ.prob;
    }
  }
  return chain;
}

StateActionDistribution stationary_distribution(const ControlledProcess& p, const Policy& pi) {
  const std::size_t n = p.num_states();
  const auto chain = induced_chain(p, pi);
  const auto report = analyse_chain(chain, n);
  if (!report.ergodic) {
    throw ErgodicityError("chain induced by the policy is not ergodic: " + report.diagnostic);
  }
  const auto d = n * p.num_actions() <= kDirectSolveLimit ? solve_direct(chain, n)
                                                           : solve_power(p, pi);
  StateActionTable lambda(n, p.num_actions());
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) lambda(s, a) = d[s] * pi(s, a);
  }
  return StateActionDistribution(std::move(lambda));
}

StateActionDistribution unichain_stationary_distribution(const ControlledProcess& p,
                                                         const Policy& pi) {
  const std::size_t n = p.num_states();
  const auto chain = induced_chain(p, pi);
  const auto closed = closed_classes(support_graph(chain, n));
  if (closed.size() != 1) {
    std::ostringstream os;
    os << "chain induced by the policy has " << closed.size()
       << " closed classes; a unique stationary law needs exactly one";
    throw ErgodicityError(os.str());
  }
  const auto d = n * p.num_actions() <= kDirectSolveLimit ? solve_direct(chain, n)
                                                           : solve_power(p, pi, true);
  StateActionTable lambda(n, p.num_actions());
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) lambda(s, a) = d[s] * pi(s, a);
  }
  return StateActionDistribution(std::move(lambda));
}

double flow_residual(const StateActionDistribution& lambda, const ControlledProcess& p) {
  const std::size_t n = p.num_states();
  std::vector<double> inflow(n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const double w = lambda(s, a);
      if (w == 0.0) continue;
      for (const auto& succ : p.successors(s, a)) inflow[succ.state] += w * succ.prob;
    }
  }
  const auto outflow = lambda.state_marginal();
  double worst = 0.0;
  for (StateId s = 0; s < n; ++s) worst = std::max(worst, std::abs(outflow[s] - inflow[s]));
  return worst;
}

ErgodicityReport check_ergodicity(const ControlledProcess& p) {
  return check_ergodicity(p, Policy::uniform(p.num_states(), p.num_actions()));
}

ErgodicityReport check_ergodicity(const ControlledProcess& p, const Policy& pi) {
  return analyse_chain(induced_chain(p, pi), p.num_states());
}

}  // namespace gae
