#include "gae/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "gae/errors.hpp"

namespace gae {

namespace {

constexpr const char* kTraceHeader = "seed,k,t,xi_geo,xi_classic,objective,planner_ms";
constexpr const char* kAggregateHeader =
    "t,mean_xi_geo,std_xi_geo,median_xi_geo,mean_xi_classic,std_xi_classic,mean_planner_ms";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Object view that remembers its path in the document and rejects keys it
// does not know.
class Section {
 public:
  Section(const Json& doc, std::string path, std::set<std::string> allowed)
      : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(label() + ": expected an object");
    for (const auto& item : doc_.items()) {
      if (!allowed.contains(item.key())) {
        throw ConfigError(at(item.key()) + ": unknown field");
      }
    }
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  const Json& raw(const std::string& key) const { return doc_.at(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  std::uint64_t uint(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(at(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(at(key) + ": expected a number");
    return v.get<double>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(at(key) + ": expected a string");
    return v.get<std::string>();
  }

  template <typename Enum>
  Enum choice(const std::string& key, Enum fallback,
              std::initializer_list<std::pair<const char*, Enum>> options) const {
    if (!has(key)) return fallback;
    const std::string value = text(key, "");
    std::string known;
    for (const auto& [name, e] : options) {
      if (value == name) return e;
      known += known.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(at(key) + ": unknown value '" + value + "' (expected one of " + known + ")");
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const Json& doc_;
  std::string path_;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field + ": " + message);
}

EnvSpec parse_env(const Json& doc) {
  EnvSpec spec;
  const std::string name = doc.is_object() && doc.contains("name") && doc["name"].is_string()
                               ? doc["name"].get<std::string>()
                               : "";
  if (name == "diffusion") {
    Section env(doc, "env", {"name", "radii", "rays", "dynamics", "q", "clamp"});
    auto& d = spec.diffusion;
    d.radii = env.uint("radii", d.radii);
    d.rays = env.uint("rays", d.rays);
    d.dynamics = env.choice("dynamics", d.dynamics,
                            {{"deterministic", DiffusionDynamics::kDeterministic},
                             {"stochastic", DiffusionDynamics::kStochastic}});
    d.q = env.number("q", d.q);
    d.clamp = env.boolean("clamp", d.clamp);
    require(d.radii >= 1, "env.radii", "must be >= 1");
    require(d.rays >= 1, "env.rays", "must be >= 1");
    require(d.q > 0.0 && d.q <= 1.0, "env.q", "must lie in (0,1]");
  } else if (name == "strings") {
    Section env(doc, "env", {"name", "alphabet", "max_len", "clamp"});
    auto& s = spec.strings;
    s.alphabet = env.uint("alphabet", s.alphabet);
    s.max_len = env.uint("max_len", s.max_len);
    s.clamp = env.boolean("clamp", s.clamp);
    require(s.alphabet >= 1 && s.alphabet <= 26, "env.alphabet", "must lie in [1,26]");
    require(s.max_len >= 1 && s.max_len <= 8, "env.max_len", "must lie in [1,8]");
  } else {
    throw ConfigError("env.name: expected \"diffusion\" or \"strings\"");
  }
  spec.name = name;
  return spec;
}

PlannerConfig parse_planner(const Json& doc) {
  Section sec(doc, "gae.planner", {"mode", "gamma", "tolerance", "max_iterations"});
  PlannerConfig p;
  p.mode = sec.choice("mode", p.mode,
                      {{"discounted", PlannerMode::kDiscounted},
                       {"average_reward", PlannerMode::kAverageReward}});
  p.discount = sec.number("gamma", p.discount);
  p.tolerance = sec.number("tolerance", p.tolerance);
  p.max_iterations = sec.uint("max_iterations", p.max_iterations);
  require(p.discount > 0.0 && p.discount < 1.0, "gae.planner.gamma", "must lie in (0,1)");
  require(p.tolerance > 0.0, "gae.planner.tolerance", "must be positive");
  require(p.max_iterations >= 1, "gae.planner.max_iterations", "must be >= 1");
  return p;
}

GaeConfig parse_gae(const Json& doc, const std::string& env_name) {
  GaeConfig g;
  if (env_name == "strings") {
    g.eta = 7e-4;
    g.tau = 20;
    g.budget = 2400;
  } else {
    g.eta = 1e-3;
    g.tau = 3;
    g.budget = 210;
  }
  if (doc.is_null()) return g;

  Section sec(doc, "gae",
              {"budget", "schedule", "eta", "delta", "lambda_update", "planner", "class_count",
               "inference"});
  g.budget = sec.uint("budget", g.budget);
  g.eta = sec.number("eta", g.eta);
  g.delta = sec.number("delta", g.delta);
  require(g.budget >= 1, "gae.budget", "must be >= 1");
  require(g.eta > 0.0, "gae.eta", "must be positive");
  require(g.delta > 0.0 && g.delta < 1.0, "gae.delta", "must lie in (0,1)");

  if (sec.has("schedule")) {
    Section sched(sec.raw("schedule"), "gae.schedule", {"mode", "tau"});
    g.schedule = sched.choice("mode", g.schedule,
                              {{"constant", ScheduleMode::kConstant}, {"cubic", ScheduleMode::kCubic}});
    g.tau = sched.uint("tau", g.tau);
    require(g.tau >= 1, "gae.schedule.tau", "must be >= 1");
  }
  if (sec.has("lambda_update")) {
    Section upd(sec.raw("lambda_update"), "gae.lambda_update", {"mode", "c"});
    g.lambda_update = upd.choice("mode", g.lambda_update,
                                 {{"constant_step", LambdaUpdate::kConstantStep},
                                  {"mixture", LambdaUpdate::kMixture}});
    g.step_constant = upd.number("c", g.step_constant);
    require(g.step_constant > 0.0, "gae.lambda_update.c", "must be positive");
  }
  if (sec.has("planner")) g.planner = parse_planner(sec.raw("planner"));
  g.class_count = sec.choice("class_count", g.class_count,
                             {{"class_total", ClassCountRule::kClassTotal},
                              {"member_sum", ClassCountRule::kMemberSum}});
  g.inference = sec.choice("inference", g.inference,
                           {{"aggregated", InferenceMode::kAggregated},
                            {"classic", InferenceMode::kClassic}});
  return g;
}

std::vector<std::uint64_t> parse_uint_list(const Json& v, const std::string& field) {
  require(v.is_array(), field, "expected an array of non-negative integers");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].is_number_unsigned(), field + "[" + std::to_string(i) + "]",
            "expected a non-negative integer");
    out.push_back(v[i].get<std::uint64_t>());
  }
  return out;
}

std::vector<std::uint64_t> parse_checkpoints(const Json& v, std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  if (v.is_object()) {
    Section sec(v, "checkpoints", {"every"});
    const std::uint64_t every = sec.uint("every", 0);
    require(every >= 1, "checkpoints.every", "must be >= 1");
    for (std::uint64_t t = every; t <= budget; t += every) out.push_back(t);
    return out;
  }
  out = parse_uint_list(v, "checkpoints");
  for (std::size_t i = 1; i < out.size(); ++i) {
    require(out[i] > out[i - 1], "checkpoints", "must be strictly increasing");
  }
  require(out.empty() || out.back() <= budget, "checkpoints", "must not exceed gae.budget");
  return out;
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::kGae: return "gae";
    case RunMode::kAe: return "ae";
    case RunMode::kAblation: return "ablation";
  }
  return "gae";
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double mean_abs(const std::vector<double>& f) {
  double acc = 0.0;
  for (double x : f) acc += std::abs(x);
  return acc / static_cast<double>(f.size());
}

double ratio(double a, double b) {
  if (a == b) return 1.0;
  return a / b;
}

Homomorphism resolve_homomorphism(const ExperimentConfig& cfg, const Environment& env) {
  if (cfg.mode == RunMode::kAe) return env.homomorphism("identity");
  return env.homomorphism(cfg.homomorphism);
}

}  // namespace

Environment build_environment(const EnvSpec& spec) {
  if (spec.name == "diffusion") return diffusion_env(spec.diffusion);
  if (spec.name == "strings") return strings_env(spec.strings);
  throw ConfigError("env.name: unknown environment '" + spec.name + "'");
}

ExperimentConfig parse_config(const Json& doc) {
  Section top(doc, "", {"env", "homomorphism", "mode", "gae", "seeds", "checkpoints", "output"});
  require(top.has("env"), "env", "missing");
  ExperimentConfig cfg;
  cfg.env = parse_env(top.raw("env"));
  cfg.homomorphism = top.text("homomorphism", cfg.env.name == "strings" ? "permutation" : "h3");
  cfg.mode = top.choice("mode", RunMode::kGae,
                        {{"gae", RunMode::kGae}, {"ae", RunMode::kAe}, {"ablation", RunMode::kAblation}});
  cfg.gae = parse_gae(top.has("gae") ? top.raw("gae") : Json(), cfg.env.name);

  if (top.has("seeds")) {
    cfg.seeds = parse_uint_list(top.raw("seeds"), "seeds");
  } else {
    cfg.seeds.resize(15);
    std::iota(cfg.seeds.begin(), cfg.seeds.end(), 0);
  }
  require(!cfg.seeds.empty(), "seeds", "must not be empty");
  const std::set<std::uint64_t> distinct(cfg.seeds.begin(), cfg.seeds.end());
  require(distinct.size() == cfg.seeds.size(), "seeds", "must be distinct");

  if (top.has("checkpoints")) cfg.checkpoints = parse_checkpoints(top.raw("checkpoints"), cfg.gae.budget);

  if (top.has("output")) {
    Section out(top.raw("output"), "output", {"dir", "timing", "estimates"});
    cfg.output_dir = out.text("dir", cfg.output_dir.string());
    cfg.gae.record_timing = out.boolean("timing", cfg.gae.record_timing);
    cfg.write_estimates = out.boolean("estimates", cfg.write_estimates);
  }

  // Catches unknown homomorphism names before any run starts.
  const Environment env = build_environment(cfg.env);
  if (cfg.mode != RunMode::kAe) {
    try {
      env.homomorphism(cfg.homomorphism);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("homomorphism: ") + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json env{{"name", cfg.env.name}};
  if (cfg.env.name == "diffusion") {
    const auto& d = cfg.env.diffusion;
    env["radii"] = d.radii;
    env["rays"] = d.rays;
    env["dynamics"] = d.dynamics == DiffusionDynamics::kDeterministic ? "deterministic" : "stochastic";
    env["q"] = d.q;
    env["clamp"] = d.clamp;
  } else {
    env["alphabet"] = cfg.env.strings.alphabet;
    env["max_len"] = cfg.env.strings.max_len;
    env["clamp"] = cfg.env.strings.clamp;
  }
  const auto& g = cfg.gae;
  Json planner{{"mode", g.planner.mode == PlannerMode::kDiscounted ? "discounted" : "average_reward"},
               {"gamma", g.planner.discount},
               {"tolerance", g.planner.tolerance},
               {"max_iterations", g.planner.max_iterations}};
  Json gae{
      {"budget", g.budget},
      {"schedule", {{"mode", g.schedule == ScheduleMode::kConstant ? "constant" : "cubic"}, {"tau", g.tau}}},
      {"eta", g.eta},
      {"delta", g.delta},
      {"lambda_update",
       {{"mode", g.lambda_update == LambdaUpdate::kConstantStep ? "constant_step" : "mixture"},
        {"c", g.step_constant}}},
      {"planner", planner},
      {"class_count", g.class_count == ClassCountRule::kClassTotal ? "class_total" : "member_sum"},
      {"inference", g.inference == InferenceMode::kAggregated ? "aggregated" : "classic"},
  };
  Json doc{{"env", env},
           {"homomorphism", cfg.homomorphism},
           {"mode", mode_name(cfg.mode)},
           {"gae", gae},
           {"seeds", cfg.seeds},
           {"output",
            {{"dir", cfg.output_dir.string()},
             {"timing", g.record_timing},
             {"estimates", cfg.write_estimates}}}};
  if (!cfg.checkpoints.empty()) doc["checkpoints"] = cfg.checkpoints;
  return doc;
}

std::vector<std::uint64_t> checkpoint_grid(const ExperimentConfig& cfg) {
  return cfg.checkpoints.empty() ? iteration_ends(cfg.gae) : cfg.checkpoints;
}

ValidationSummary validate_experiment(const ExperimentConfig& cfg) {
  ValidationSummary out;
  const Environment env = build_environment(cfg.env);
  const Homomorphism h = resolve_homomorphism(cfg, env);
  out.environment = env.name;
  out.num_states = env.num_states();
  out.num_actions = env.process.num_actions();
  out.num_abstract_states = h.num_abstract_states();
  out.compression = compression(h);
  out.problems = validate_process(env.process);
  for (auto& line : validate(h, env.process, std::span<const double>(env.f))) {
    out.problems.push_back(std::move(line));
  }
  const auto ergodic = check_ergodicity(env.process);
  out.ergodic = ergodic.ergodic;
  if (!ergodic.ergodic) out.problems.push_back("not ergodic: " + ergodic.diagnostic);
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunTrace>& traces,
                                    const std::vector<std::uint64_t>& checkpoints,
                                    double initial_error) {
  if (traces.empty()) throw ParameterError("aggregate needs at least one trace");
  std::vector<AggregateRow> rows;
  rows.reserve(checkpoints.size());
  std::vector<double> geo(traces.size()), classic(traces.size()), planner(traces.size());
  for (std::uint64_t t : checkpoints) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      geo[i] = error_at(traces[i], t, initial_error, true);
      classic[i] = error_at(traces[i], t, initial_error, false);
      double ms = 0.0;
      for (const auto& r : traces[i].records) {
        if (r.t > t) break;
        ms += r.planner_ms;
      }
      planner[i] = ms;
    }
    AggregateRow row;
    row.t = t;
    row.mean_xi_geo = mean_of(geo);
    row.std_xi_geo = sample_std(geo, row.mean_xi_geo);
    row.median_xi_geo = median_of(geo);
    row.mean_xi_classic = mean_of(classic);
    row.std_xi_classic = sample_std(classic, row.mean_xi_classic);
    row.mean_planner_ms = mean_of(planner);
    rows.push_back(row);
  }
  return rows;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  const Environment env = build_environment(cfg.env);
  const Homomorphism h = resolve_homomorphism(cfg, env);

  ExperimentReport report;
  report.seeds.resize(cfg.seeds.size());
  std::vector<std::exception_ptr> failures(cfg.seeds.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      try {
        GaeConfig run_cfg = cfg.gae;
        run_cfg.seed = cfg.seeds[i];
        RunResult result = [&] {
          switch (cfg.mode) {
            case RunMode::kAe: return run_ae(env, run_cfg);
            case RunMode::kAblation: return run_inference_bias_ablation(env, h, run_cfg);
            case RunMode::kGae: break;
          }
          return run_gae(env, h, run_cfg);
        }();
        report.seeds[i] = SeedResult{std::move(result.trace), std::move(result.estimates),
                                     snapshot(result.estimator)};
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, cfg.seeds.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw Error("seed " + std::to_string(cfg.seeds[i]) + " failed: " + e.what());
    }
  }

  std::vector<RunTrace> traces;
  traces.reserve(report.seeds.size());
  for (const auto& s : report.seeds) traces.push_back(s.trace);
  report.aggregate = aggregate(traces, checkpoint_grid(cfg), mean_abs(env.f));
  report.compression = compression(h);
  return report;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    os << trace.seed << ',' << r.k << ',' << r.t << ',' << fmt(r.xi_geo) << ',' << fmt(r.xi_classic)
       << ',' << fmt(r.objective) << ',' << fmt(r.planner_ms) << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    os << r.t << ',' << fmt(r.mean_xi_geo) << ',' << fmt(r.std_xi_geo) << ',' << fmt(r.median_xi_geo)
       << ',' << fmt(r.mean_xi_classic) << ',' << fmt(r.std_xi_classic) << ','
       << fmt(r.mean_planner_ms) << '\n';
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kAggregateHeader) {
    throw ComparisonError("aggregate file does not start with the expected header");
  }
  std::vector<AggregateRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) {
      throw ComparisonError("aggregate line " + std::to_string(lineno) + " does not have 7 columns");
    }
    try {
      AggregateRow r;
      r.t = std::stoull(cells[0]);
      r.mean_xi_geo = std::stod(cells[1]);
      r.std_xi_geo = std::stod(cells[2]);
      r.median_xi_geo = std::stod(cells[3]);
      r.mean_xi_classic = std::stod(cells[4]);
      r.std_xi_classic = std::stod(cells[5]);
      r.mean_planner_ms = std::stod(cells[6]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ComparisonError("aggregate line " + std::to_string(lineno) + " is not numeric");
    }
  }
  return rows;
}

void write_report(const ExperimentConfig& cfg, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const auto open = [&](const std::string& name) {
    std::ofstream out(cfg.output_dir / name);
    if (!out) throw Error("cannot write " + (cfg.output_dir / name).string());
    return out;
  };

  const Json echo = config_to_json(cfg);
  for (const auto& seed : report.seeds) {
    const std::string id = std::to_string(seed.trace.seed);
    {
      auto out = open("trace_seed" + id + ".csv");
      write_trace_csv(out, seed.trace);
    }
    Json summary{{"seed", seed.trace.seed},
                 {"mode", mode_name(cfg.mode)},
                 {"homomorphism", cfg.mode == RunMode::kAe ? "identity" : cfg.homomorphism},
                 {"compression", seed.trace.compression},
                 {"final_estimates", seed.estimates},
                 {"final_counts", seed.trace.final_counts},
                 {"total_ms", seed.trace.total_ms},
                 {"config", echo}};
    if (!seed.trace.records.empty()) {
      const auto& last = seed.trace.records.back();
      summary["final_t"] = last.t;
      summary["final_xi_geo"] = last.xi_geo;
      summary["final_xi_classic"] = last.xi_classic;
    }
    {
      auto out = open("summary_seed" + id + ".json");
      out << summary.dump(2) << '\n';
    }
    if (cfg.write_estimates) {
      auto out = open("estimates_seed" + id + ".csv");
      write_estimates_csv(out, seed.snapshot);
    }
  }
  auto out = open("aggregate.csv");
  write_aggregate_csv(out, report.aggregate);
}

std::vector<ComparisonRow> compare(const std::vector<AggregateRow>& a,
                                   const std::vector<AggregateRow>& b) {
  if (a.size() != b.size()) {
    throw ComparisonError("checkpoint grids differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + " rows");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t != b[i].t) {
      throw ComparisonError("checkpoint grids differ at row " + std::to_string(i + 1) + ": t=" +
                            std::to_string(a[i].t) + " vs t=" + std::to_string(b[i].t));
    }
    rows.push_back({a[i].t, ratio(a[i].mean_xi_geo, b[i].mean_xi_geo),
                    ratio(a[i].mean_planner_ms, b[i].mean_planner_ms)});
  }
  return rows;
}

std::vector<ComparisonRow> compare_directories(const std::filesystem::path& a,
                                               const std::filesystem::path& b) {
  const auto load = [](const std::filesystem::path& dir) {
    std::ifstream in(dir / "aggregate.csv");
    if (!in) throw ComparisonError("cannot open " + (dir / "aggregate.csv").string());
    return read_aggregate_csv(in);
  };
  return compare(load(a), load(b));
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "t,error_ratio,runtime_ratio\n";
  for (const auto& r : rows) os << r.t << ',' << fmt(r.error_ratio) << ',' << fmt(r.runtime_ratio) << '\n';
}

}  // namespace gae
