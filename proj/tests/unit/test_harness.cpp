#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "gae/errors.hpp"
#include "gae/harness.hpp"
#include "support.hpp"

using namespace gae;

namespace {

std::string config_error(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gae_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_experiment() {
  return parse_config(Json::parse(R"({
    "env": {"name": "diffusion", "radii": 6, "rays": 4},
    "homomorphism": "h3",
    "gae": {"budget": 45},
    "seeds": [0, 1, 2, 3],
    "output": {"timing": false}
  })"));
}

}  // namespace

TEST(Config, DefaultsPerEnvironment) {
  const auto d = parse_config(Json::parse(R"({"env": {"name": "diffusion"}})"));
  EXPECT_EQ(d.homomorphism, "h3");
  EXPECT_EQ(d.gae.eta, 1e-3);
  EXPECT_EQ(d.gae.tau, 3u);
  EXPECT_EQ(d.gae.budget, 210u);
  EXPECT_EQ(d.gae.delta, 0.01);
  EXPECT_EQ(d.seeds.size(), 15u);
  EXPECT_EQ(d.mode, RunMode::kGae);

  const auto s = parse_config(Json::parse(R"({"env": {"name": "strings"}})"));
  EXPECT_EQ(s.homomorphism, "permutation");
  EXPECT_EQ(s.gae.eta, 7e-4);
  EXPECT_EQ(s.gae.tau, 20u);
  EXPECT_EQ(s.gae.budget, 2400u);
}

TEST(Config, FullDocument) {
  const auto cfg = parse_config(Json::parse(R"({
    "env": {"name": "diffusion", "dynamics": "stochastic", "q": 0.9},
    "homomorphism": "h2",
    "mode": "ablation",
    "gae": {"budget": 100, "schedule": {"mode": "cubic"}, "eta": 0.01, "delta": 0.05,
            "lambda_update": {"mode": "mixture"},
            "planner": {"mode": "average_reward", "tolerance": 1e-6},
            "class_count": "member_sum", "inference": "classic"},
    "seeds": [4, 2],
    "checkpoints": {"every": 25},
    "output": {"dir": "somewhere", "timing": false, "estimates": true}
  })"));
  EXPECT_EQ(cfg.env.diffusion.dynamics, DiffusionDynamics::kStochastic);
  EXPECT_EQ(cfg.env.diffusion.q, 0.9);
  EXPECT_EQ(cfg.mode, RunMode::kAblation);
  EXPECT_EQ(cfg.gae.schedule, ScheduleMode::kCubic);
  EXPECT_EQ(cfg.gae.lambda_update, LambdaUpdate::kMixture);
  EXPECT_EQ(cfg.gae.planner.mode, PlannerMode::kAverageReward);
  EXPECT_EQ(cfg.gae.class_count, ClassCountRule::kMemberSum);
  EXPECT_EQ(cfg.gae.inference, InferenceMode::kClassic);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 2}));
  EXPECT_EQ(cfg.checkpoints, (std::vector<std::uint64_t>{25, 50, 75, 100}));
  EXPECT_EQ(cfg.output_dir, "somewhere");
  EXPECT_FALSE(cfg.gae.record_timing);
  EXPECT_TRUE(cfg.write_estimates);
}

TEST(Config, ErrorsNameTheField) {
  const auto has = [](const std::string& msg, const std::string& field) {
    return msg.find(field) != std::string::npos;
  };
  EXPECT_TRUE(has(config_error(Json::parse(R"({})")), "env"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "maze"}})")), "env.name"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion", "radius": 3}})")),
                  "env.radius"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "gae": {"eta": -1}})")),
                  "gae.eta"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "gae": {"delta": 2}})")),
                  "gae.delta"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "seeds": [1, 1]})")),
                  "seeds"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "seeds": []})")),
                  "seeds"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "seeds": [-1]})")),
                  "seeds[0]"));
  EXPECT_TRUE(has(config_error(Json::parse(
                      R"({"env": {"name": "diffusion"}, "gae": {"planner": {"gamma": 1.0}}})")),
                  "gae.planner.gamma"));
  EXPECT_TRUE(has(config_error(Json::parse(
                      R"({"env": {"name": "diffusion"}, "gae": {"schedule": {"mode": "linear"}}})")),
                  "gae.schedule.mode"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "checkpoints": [5, 3]})")),
                  "checkpoints"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "checkpoints": [500]})")),
                  "checkpoints"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "homomorphism": "h7"})")),
                  "homomorphism"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "strings"}, "homomorphism": "h3"})")),
                  "homomorphism"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "extra": 1})")),
                  "extra"));
  EXPECT_TRUE(has(config_error(Json::parse(R"({"env": {"name": "diffusion"}, "mode": "fast"})")),
                  "mode"));
}

TEST(Config, LoadReportsParseErrors) {
  const auto dir = scratch_dir("load");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(load_config(dir / "broken.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "ok.json") << R"({"env": {"name": "strings"}, "seeds": [3]})";
  EXPECT_EQ(load_config(dir / "ok.json").seeds, (std::vector<std::uint64_t>{3}));
}

TEST(Config, JsonRoundTrip) {
  const auto cfg = parse_config(Json::parse(R"({
    "env": {"name": "strings", "max_len": 4},
    "mode": "ae",
    "gae": {"budget": 300, "lambda_update": {"mode": "mixture", "c": 0.1}},
    "seeds": [7, 8, 9],
    "checkpoints": [100, 200, 300]
  })"));
  const Json doc = config_to_json(cfg);
  EXPECT_EQ(config_to_json(parse_config(doc)), doc);
  EXPECT_EQ(parse_config(doc).checkpoints, cfg.checkpoints);
  EXPECT_EQ(parse_config(doc).env.strings.max_len, 4u);
}

TEST(Config, CheckpointGridDefaultsToIterationEnds) {
  auto cfg = small_experiment();
  EXPECT_EQ(checkpoint_grid(cfg), iteration_ends(cfg.gae));
  cfg.checkpoints = {10, 20};
  EXPECT_EQ(checkpoint_grid(cfg), cfg.checkpoints);
}

TEST(Validate, SummaryOfCanonicalSetups) {
  auto cfg = parse_config(Json::parse(R"({"env": {"name": "diffusion"}})"));
  auto summary = validate_experiment(cfg);
  EXPECT_TRUE(summary.ok());
  EXPECT_EQ(summary.num_states, 240u);
  EXPECT_EQ(summary.num_abstract_states, 30u);
  EXPECT_EQ(summary.compression, 0.125);

  cfg = parse_config(Json::parse(R"({"env": {"name": "strings"}})"));
  summary = validate_experiment(cfg);
  EXPECT_TRUE(summary.ok());
  EXPECT_EQ(summary.num_abstract_states, 55u);
}

TEST(Aggregate, MatchesIndependentRecomputation) {
  std::vector<RunTrace> traces(3);
  traces[0].records = {{.k = 1, .t = 3, .xi_geo = 4.0, .xi_classic = 5.0, .planner_ms = 1.0},
                       {.k = 2, .t = 6, .xi_geo = 2.0, .xi_classic = 3.0, .planner_ms = 2.0}};
  traces[1].records = {{.k = 1, .t = 3, .xi_geo = 6.0, .xi_classic = 6.0, .planner_ms = 3.0},
                       {.k = 2, .t = 6, .xi_geo = 1.0, .xi_classic = 2.0, .planner_ms = 1.0}};
  traces[2].records = {{.k = 1, .t = 3, .xi_geo = 8.0, .xi_classic = 7.0, .planner_ms = 2.0},
                       {.k = 2, .t = 6, .xi_geo = 3.0, .xi_classic = 1.0, .planner_ms = 0.0}};
  const auto rows = aggregate(traces, {0, 3, 5, 6}, 10.0);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].mean_xi_geo, 10.0);
  EXPECT_EQ(rows[0].std_xi_geo, 0.0);
  EXPECT_EQ(rows[0].mean_planner_ms, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].mean_xi_geo, 6.0);
  EXPECT_DOUBLE_EQ(rows[1].std_xi_geo, 2.0);
  EXPECT_DOUBLE_EQ(rows[1].median_xi_geo, 6.0);
  EXPECT_DOUBLE_EQ(rows[1].mean_xi_classic, 6.0);
  EXPECT_DOUBLE_EQ(rows[1].std_xi_classic, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].mean_planner_ms, 2.0);
  EXPECT_EQ(rows[2].mean_xi_geo, rows[1].mean_xi_geo);
  EXPECT_DOUBLE_EQ(rows[3].mean_xi_geo, 2.0);
  EXPECT_DOUBLE_EQ(rows[3].median_xi_geo, 2.0);
  EXPECT_DOUBLE_EQ(rows[3].mean_planner_ms, 3.0);
  EXPECT_THROW(aggregate({}, {1}, 0.0), ParameterError);
}

TEST(Experiment, SingleSeedSingleStep) {
  auto cfg = small_experiment();
  cfg.gae.budget = 1;
  cfg.seeds = {5};
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.seeds.size(), 1u);
  ASSERT_EQ(report.seeds[0].trace.records.size(), 1u);
  EXPECT_EQ(report.seeds[0].trace.records[0].t, 1u);
  EXPECT_EQ(report.aggregate.size(), 1u);
  std::ostringstream os;
  write_trace_csv(os, report.seeds[0].trace);
  std::istringstream lines(os.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 2u);
}

TEST(Experiment, AggregateAgreesWithTraces) {
  auto cfg = small_experiment();
  cfg.checkpoints = {0, 10, 20, 45};
  const auto report = run_experiment(cfg, 2);
  ASSERT_EQ(report.aggregate.size(), cfg.checkpoints.size());
  const auto env = build_environment(cfg.env);
  const double initial = std::accumulate(env.f.begin(), env.f.end(), 0.0) / env.num_states();
  for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
    double sum = 0.0;
    for (const auto& seed : report.seeds) sum += error_at(seed.trace, cfg.checkpoints[c], initial);
    EXPECT_NEAR(report.aggregate[c].mean_xi_geo, sum / report.seeds.size(), 1e-9);
  }
  EXPECT_EQ(report.compression, 0.25);
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    EXPECT_EQ(report.seeds[i].trace.seed, cfg.seeds[i]);
  }
}

TEST(Experiment, ParallelEqualsSerial) {
  const auto cfg = small_experiment();
  const auto serial = run_experiment(cfg, 1);
  const auto parallel = run_experiment(cfg, 4);
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    EXPECT_EQ(serial.seeds[i].estimates, parallel.seeds[i].estimates);
  }
}

TEST(Experiment, FailingSeedIsNamed) {
  auto cfg = small_experiment();
  cfg.gae.planner.max_iterations = 1;
  cfg.gae.planner.tolerance = 1e-14;
  try {
    run_experiment(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("seed 0"), std::string::npos);
  }
}

TEST(Report, RerunIsByteIdentical) {
  auto cfg = small_experiment();
  cfg.write_estimates = true;
  cfg.output_dir = scratch_dir("rerun_a");
  write_report(cfg, run_experiment(cfg));
  const auto first = cfg.output_dir;
  cfg.output_dir = scratch_dir("rerun_b");
  write_report(cfg, run_experiment(cfg, 3));
  for (const auto& entry : std::filesystem::directory_iterator(first)) {
    const auto name = entry.path().filename();
    if (name.string().starts_with("summary")) continue;  // echoes the output dir
    ASSERT_TRUE(std::filesystem::exists(cfg.output_dir / name)) << name;
    EXPECT_EQ(slurp(entry.path()), slurp(cfg.output_dir / name)) << name;
  }
  EXPECT_TRUE(std::filesystem::exists(first / "trace_seed3.csv"));
  EXPECT_TRUE(std::filesystem::exists(first / "estimates_seed0.csv"));
  EXPECT_TRUE(std::filesystem::exists(first / "aggregate.csv"));
}

TEST(Report, AggregateCsvRoundTrip) {
  const auto report = run_experiment(small_experiment());
  std::stringstream ss;
  write_aggregate_csv(ss, report.aggregate);
  const auto back = read_aggregate_csv(ss);
  ASSERT_EQ(back.size(), report.aggregate.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].t, report.aggregate[i].t);
    EXPECT_EQ(back[i].mean_xi_geo, report.aggregate[i].mean_xi_geo);
    EXPECT_EQ(back[i].std_xi_geo, report.aggregate[i].std_xi_geo);
  }
  std::istringstream bad("t,mean\n1,2\n");
  EXPECT_THROW(read_aggregate_csv(bad), ComparisonError);
}

TEST(Compare, IdenticalRunsGiveUnitRatios) {
  const auto report = run_experiment(small_experiment());
  for (const auto& row : compare(report.aggregate, report.aggregate)) {
    EXPECT_EQ(row.error_ratio, 1.0);
    EXPECT_EQ(row.runtime_ratio, 1.0);
  }
}

TEST(Compare, RatiosAndGridMismatch) {
  std::vector<AggregateRow> a{{.t = 10, .mean_xi_geo = 2.0, .mean_planner_ms = 3.0}};
  std::vector<AggregateRow> b{{.t = 10, .mean_xi_geo = 4.0, .mean_planner_ms = 6.0}};
  const auto rows = compare(a, b);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].error_ratio, 0.5);
  EXPECT_EQ(rows[0].runtime_ratio, 0.5);
  b[0].t = 11;
  EXPECT_THROW(compare(a, b), ComparisonError);
  b.push_back(b[0]);
  EXPECT_THROW(compare(a, b), ComparisonError);
}

TEST(Compare, Directories) {
  auto cfg = small_experiment();
  cfg.output_dir = scratch_dir("cmp_a");
  write_report(cfg, run_experiment(cfg));
  auto other = cfg;
  other.mode = RunMode::kAe;
  other.output_dir = scratch_dir("cmp_b");
  write_report(other, run_experiment(other));
  const auto rows = compare_directories(cfg.output_dir, other.output_dir);
  EXPECT_EQ(rows.size(), checkpoint_grid(cfg).size());
  auto longer = cfg;
  longer.gae.budget = 60;
  longer.output_dir = scratch_dir("cmp_c");
  write_report(longer, run_experiment(longer));
  EXPECT_THROW(compare_directories(cfg.output_dir, longer.output_dir), ComparisonError);
}

TEST(Serialization, ProcessRoundTrip) {
  const auto env = diffusion_env({.radii = 3, .rays = 4, .dynamics = DiffusionDynamics::kStochastic});
  const auto back = process_from_json(process_to_json(env.process));
  ASSERT_EQ(back.num_states(), env.process.num_states());
  for (StateId s = 0; s < back.num_states(); ++s) {
    for (ActionId a = 0; a < back.num_actions(); ++a) {
      for (StateId t = 0; t < back.num_states(); ++t) {
        EXPECT_EQ(back.prob(s, a, t), env.process.prob(s, a, t));
      }
    }
  }
  EXPECT_EQ(back.initial_dist(), env.process.initial_dist());
}

TEST(Serialization, MalformedProcess) {
  EXPECT_THROW(process_from_json(Json::parse(R"({"num_states": 1})")), ConfigError);
  EXPECT_THROW(process_from_json(Json::parse(
                   R"({"num_states": 1, "num_actions": 1, "transitions": [[[0.5]]], "initial_dist": [1]})")),
               ParameterError);
}

TEST(Serialization, HomomorphismAndGroupRoundTrip) {
  const auto env = strings_env({.alphabet = 2, .max_len = 3});
  const auto h = env.homomorphism("permutation");
  const auto back = homomorphism_from_json(homomorphism_to_json(h));
  EXPECT_EQ(back.state_map(), h.state_map());
  EXPECT_EQ(back.action_maps(), h.action_maps());

  const auto group = diffusion_rotations(2, 4);
  const auto g = group_action_from_json(group_action_to_json(group));
  EXPECT_EQ(g.state_perms, group.state_perms);
  EXPECT_EQ(g.action_perms, group.action_perms);
}

TEST(Serialization, EstimatesCsv) {
  std::ostringstream os;
  write_estimates_csv(os, {{.state = 0, .count = 2, .mean = 1.5, .variance = 0.25}});
  EXPECT_EQ(os.str(), "state,count,mean,variance\n0,2,1.5,0.25\n");
}
