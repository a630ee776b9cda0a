#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gae/environments.hpp"
#include "gae/exploration.hpp"
#include "gae/serialization.hpp"

namespace gae {

enum class RunMode { kGae, kAe, kAblation };

struct EnvSpec {
  std::string name = "diffusion";  // "diffusion" or "strings"
  DiffusionOptions diffusion;
  StringsOptions strings;
};

Environment build_environment(const EnvSpec& spec);

struct ExperimentConfig {
  EnvSpec env;
  std::string homomorphism;  // resolved against the environment, "identity" allowed
  RunMode mode = RunMode::kGae;
  GaeConfig gae;
  std::vector<std::uint64_t> seeds;
  /// Step counts at which the aggregate is reported. Empty means the end of
  /// every iteration.
  std::vector<std::uint64_t> checkpoints;
  std::filesystem::path output_dir = "gae_out";
  bool write_estimates = false;
};

/// Parses a config document. Missing fields take the per-environment
/// defaults (diffusion: η=1e-3, τ=3, n=210, h3; strings: η=7e-4, τ=20,
/// n=2400, permutation). Unknown fields and invalid values raise ConfigError
/// naming the offending field.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
Json config_to_json(const ExperimentConfig& cfg);

/// The config's checkpoints, or the iteration ends when none were given.
std::vector<std::uint64_t> checkpoint_grid(const ExperimentConfig& cfg);

struct ValidationSummary {
  std::string environment;
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t num_abstract_states = 0;
  double compression = 1.0;
  bool ergodic = false;
  std::vector<std::string> problems;

  bool ok() const { return ergodic && problems.empty(); }
};

/// Builds the environment and homomorphism of cfg and checks the process,
/// the homomorphism conditions and ergodicity without running anything.
ValidationSummary validate_experiment(const ExperimentConfig& cfg);

struct SeedResult {
  RunTrace trace;
  std::vector<double> estimates;
  std::vector<EstimateRow> snapshot;
};

struct AggregateRow {
  std::uint64_t t = 0;
  double mean_xi_geo = 0.0;
  double std_xi_geo = 0.0;
  double median_xi_geo = 0.0;
  double mean_xi_classic = 0.0;
  double std_xi_classic = 0.0;
  double mean_planner_ms = 0.0;  // cumulative planner time up to t
};

/// Per-checkpoint statistics across seeds. initial_error is reported for
/// checkpoints before the first iteration.
std::vector<AggregateRow> aggregate(const std::vector<RunTrace>& traces,
                                    const std::vector<std::uint64_t>& checkpoints,
                                    double initial_error);

struct ExperimentReport {
  std::vector<SeedResult> seeds;  // in config order
  std::vector<AggregateRow> aggregate;
  double compression = 1.0;
};

/// Runs every seed with up to `jobs` worker threads. A failing seed raises
/// Error naming the seed.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

void write_trace_csv(std::ostream& os, const RunTrace& trace);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(std::istream& is);

/// trace_seed<seed>.csv, summary_seed<seed>.json, aggregate.csv and, when
/// requested, estimates_seed<seed>.csv under cfg.output_dir.
void write_report(const ExperimentConfig& cfg, const ExperimentReport& report);

struct ComparisonRow {
  std::uint64_t t = 0;
  double error_ratio = 1.0;    // mean ξ̄ of A over B
  double runtime_ratio = 1.0;  // mean planner time of A over B
};

/// Throws ComparisonError unless both reports use the same checkpoint grid.
std::vector<ComparisonRow> compare(const std::vector<AggregateRow>& a,
                                   const std::vector<AggregateRow>& b);
std::vector<ComparisonRow> compare_directories(const std::filesystem::path& a,
                                               const std::filesystem::path& b);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace gae
