// Copyright 2026 the cwsc authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner for generalized Curie-Weiss matrix ensembles.
//
//   cwsc run --config experiment.json [--seed S] [--out DIR] [--jobs J]
//   cwsc list-experiments
//
// Exit codes: 0 all checks passed, 1 some check failed, 2 usage error,
// 3 numeric error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cwsc/errors.hpp"
#include "cwsc/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Curie-Weiss matrix ensemble experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = -1;

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  run_cmd->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  run_cmd->add_option("--seed", seed, "override base seed")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  run_cmd->add_option("--out", out_dir, "override output directory");
  run_cmd->add_option("--jobs", jobs, "worker threads (default: all cores)");

  CLI::App* list_cmd =
      app.add_subcommand("list-experiments", "list experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& line : cwsc::list_experiments()) {
        std::cout << line << '\n';
      }
      return 0;
    }
    cwsc::ExperimentConfig config =
        cwsc::ExperimentConfig::load_file(config_path);
    if (seed_set) config.base_seed = seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (jobs >= 0) config.jobs = jobs;

    const cwsc::ExperimentOutcome outcome = cwsc::run(config);
    for (const std::string& line : outcome.summary_lines) {
      std::cout << line << '\n';
    }
    std::cout << (outcome.all_passed ? "ALL CHECKS PASSED"
                                     : "SOME CHECKS FAILED")
              << '\n';
    return outcome.all_passed ? 0 : 1;
  } catch (const cwsc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const cwsc::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
