// Copyright 2026 The pcid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pcid run --config FILE [--seed N] [--paths N] [--horizon N] [--threads N] [--out DIR]
// pcid list-specs
// pcid list-tests

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pcid/errors.hpp"
#include "pcid/runner.hpp"

namespace {

int Run(const std::string& config_file, const pcid::RunOverrides& overrides, unsigned threads) {
  try {
    pcid::ExperimentConfig config = pcid::load_config(config_file);
    pcid::apply_overrides(config, overrides);
    pcid::ensure_writable(config.output);
    const pcid::ExperimentResult result = pcid::run_experiment(config, threads);
    pcid::write_outputs(config, result, threads);
    std::cout << result.summary;
    return result.all_pass ? pcid::kExitPass : pcid::kExitFail;
  } catch (const pcid::IoError& e) {
    std::cerr << "pcid: " << e.what() << "\n";
    return pcid::kExitIo;
  } catch (const pcid::ConfigError& e) {
    std::cerr << "pcid: " << e.what() << "\n";
    return pcid::kExitConfig;
  } catch (const pcid::SpecError& e) {
    std::cerr << "pcid: invalid spec: " << e.what() << "\n";
    return pcid::kExitConfig;
  } catch (const pcid::VerifierError& e) {
    std::cerr << "pcid: " << e.what() << "\n";
    return pcid::kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "pcid: " << e.what() << "\n";
    return pcid::kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify partially conditionally identically distributed processes"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the verifiers named in a config file");
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths, horizon;
  std::optional<std::string> out;
  unsigned threads = 0;
  run->add_option("--config", config_file, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "master seed; falls back to the config, then PCID_SEED");
  run->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
  run->add_option("--horizon", horizon, "steps per path")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "worker threads, 0 = all cores");
  run->add_option("--out", out, "output directory");

  auto* specs = app.add_subcommand("list-specs", "list process kinds");
  auto* tests = app.add_subcommand("list-tests", "list verifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pcid::kExitConfig;
  }

  if (*specs) {
    for (const auto& line : pcid::list_specs()) std::cout << line << "\n";
    return 0;
  }
  if (*tests) {
    for (const auto& line : pcid::list_tests()) std::cout << line << "\n";
    return 0;
  }
  return Run(config_file, {seed, paths, horizon, out}, threads);
}
