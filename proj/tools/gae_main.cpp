// Command-line driver: run seeded experiment batteries, compare reports,
// validate configs and export environments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gae/errors.hpp"
#include "gae/harness.hpp"
#include "gae/serialization.hpp"

namespace {

int cmd_run(const std::string& config_path, std::size_t jobs, bool quiet) {
  const auto cfg = gae::load_config(config_path);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto report = gae::run_experiment(cfg, jobs);
  gae::write_report(cfg, report);
  if (!quiet) {
    const auto& last = report.aggregate.back();
    std::printf("%zu seed(s), compression %.6g, t=%llu: median xi_geo %.6g, mean %.6g +- %.6g\n",
                report.seeds.size(), report.compression, static_cast<unsigned long long>(last.t),
                last.median_xi_geo, last.mean_xi_geo, last.std_xi_geo);
    std::printf("wrote %s\n", cfg.output_dir.string().c_str());
  }
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out_path) {
  const auto rows = gae::compare_directories(a, b);
  if (out_path.empty()) {
    gae::write_comparison_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw gae::Error("cannot write " + out_path);
    gae::write_comparison_csv(out, rows);
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = gae::load_config(config_path);
  const auto summary = gae::validate_experiment(cfg);
  std::printf("environment %s: S=%zu A=%zu\n", summary.environment.c_str(), summary.num_states,
              summary.num_actions);
  std::printf("homomorphism %s: abstract states %zu, compression %.6g\n",
              cfg.mode == gae::RunMode::kAe ? "identity" : cfg.homomorphism.c_str(),
              summary.num_abstract_states, summary.compression);
  std::printf("ergodic: %s\n", summary.ergodic ? "yes" : "no");
  for (const auto& p : summary.problems) std::printf("problem: %s\n", p.c_str());
  if (!summary.ok()) return 1;
  std::printf("config ok\n");
  return 0;
}

int cmd_export(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = gae::load_config(config_path);
  const auto env = gae::build_environment(cfg.env);
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / "cmp.json")
      << gae::process_to_json(env.process).dump() << '\n';
  const std::string name = cfg.mode == gae::RunMode::kAe ? "identity" : cfg.homomorphism;
  std::ofstream(std::filesystem::path(out_dir) / "homomorphism.json")
      << gae::homomorphism_to_json(env.homomorphism(name)).dump() << '\n';
  if (env.symmetry) {
    std::ofstream(std::filesystem::path(out_dir) / "group.json")
        << gae::group_action_to_json(*env.symmetry).dump() << '\n';
  }
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric active exploration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t jobs = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run every seed of an experiment and write traces");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--jobs", jobs, "Worker threads across seeds (0 = all cores)");
  run->add_flag("--quiet", quiet, "Do not print the final summary");

  std::string dir_a, dir_b, compare_out;
  auto* cmp = app.add_subcommand("compare", "Error and runtime ratios of report A over report B");
  cmp->add_option("--a", dir_a, "Output directory of run A")->required();
  cmp->add_option("--b", dir_b, "Output directory of run B")->required();
  cmp->add_option("--out", compare_out, "Write the table here instead of stdout");

  auto* val = app.add_subcommand("validate", "Check env, homomorphism and config without running");
  val->add_option("--config", config_path, "Experiment config (JSON)")->required();

  std::string export_dir;
  auto* exp = app.add_subcommand("export", "Write the environment's CMP and homomorphism as JSON");
  exp->add_option("--config", config_path, "Experiment config (JSON)")->required();
  exp->add_option("--out", export_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, jobs, quiet);
    if (*cmp) return cmd_compare(dir_a, dir_b, compare_out);
    if (*val) return cmd_validate(config_path);
    if (*exp) return cmd_export(config_path, export_dir);
  } catch (const gae::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
