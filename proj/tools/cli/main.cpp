// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// samsde: run a configured experiment or list the available kinds.
//
//   samsde run <config.json> [--seed N] [--threads N] [--paper-scale] [--out DIR]
//   samsde list

#include "samsde/runner/experiments.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

namespace {

using namespace samsde::runner;

int run_command(const std::string& path, std::optional<std::uint64_t> seed,
                std::optional<std::int64_t> threads, bool paper_scale,
                std::optional<std::string> out_dir) {
  ExperimentConfig cfg;
  ExperimentConfig resolved;
  try {
    cfg = load_config(path);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (paper_scale) cfg.paper_scale = true;
    if (out_dir) cfg.out = *out_dir;
    resolved = resolve(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Output out = run_experiment(resolved);
    write_outputs(resolved.out, out, to_json(resolved));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "%s: wrote %s (%.1f s)\n", resolved.experiment.c_str(),
               resolved.out.c_str(), secs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAM-family optimizers, their SDE models, and the experiment suite"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> threads;
  bool paper_scale = false;
  std::optional<std::string> out_dir;
  run->add_option("config", config, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--threads", threads, "cap on worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--paper-scale", paper_scale, "use full paper-size defaults");
  run->add_option("--out", out_dir, "output directory");

  auto* list = app.add_subcommand("list", "list experiment kinds and their figures");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << list_table();
    return 0;
  }
  return run_command(config, seed, threads, paper_scale, out_dir);
}
