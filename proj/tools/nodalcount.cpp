// nodalcount: run experiments and the verification suite from the shell.
//
//   nodalcount run <experiment> [--config path.json] [--seed U64] [--workers N] [--out DIR]
//   nodalcount verify [--seed U64] [--workers N] [--out DIR]
//
// Exit status: 0 success, 1 runtime error, 2 invalid configuration,
// 3 verification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "nodalcount/experiments.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

void print_checks(const nodalcount::ExperimentResult& r) {
  for (const auto& c : r.checks) {
    const char* status = c.passed ? "PASS" : (c.informational ? "WARN" : "FAIL");
    std::printf("%-4s %-44s value=%-12.6g threshold=%-12.6g%s%s\n", status, c.name.c_str(), c.value, c.threshold,
                c.detail.empty() ? "" : " ", c.detail.c_str());
  }
  std::printf("nongeneric=%llu elapsed=%.2fs\n", static_cast<unsigned long long>(r.nongeneric), r.elapsed_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal counts of random symmetric matrices"};
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;

  auto* run = app.add_subcommand("run", "Run one experiment and write its tables");
  run->add_option("experiment", experiment, "Experiment name")->required();
  run->add_option("--config", config_path, "JSON configuration")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Root directory for run outputs");

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--seed", seed, "Master seed");
  verify->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", out, "Also write the results under this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  nodalcount::ExperimentConfig cfg;
  try {
    if (*run) {
      const auto kind = nodalcount::parse_experiment(experiment);
      cfg = config_path.empty() ? nodalcount::default_config(kind) : nodalcount::load_config(config_path, kind);
    } else {
      cfg = nodalcount::default_config(nodalcount::ExperimentKind::VerifySuite);
    }
    if (seed) cfg.seed.master_seed = *seed;
    if (workers) cfg.workers = *workers;
    if (out) cfg.output_dir = *out;
    cfg.validate();
  } catch (const nodalcount::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto result = nodalcount::run_experiment(cfg);
    print_checks(result);
    if (*run || out) {
      const auto dir = nodalcount::write_result(result, cfg.output_dir);
      std::printf("wrote %s\n", dir.string().c_str());
    }
    if (cfg.experiment == nodalcount::ExperimentKind::VerifySuite && !result.passed()) return kExitVerify;
    return 0;
  } catch (const nodalcount::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
