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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcid/process_spec.hpp"
#include "pcid/verifiers.hpp"

namespace pcid {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kReportSchemaVersion = 1;

/// Malformed config, unknown verifier or unknown series. Maps to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable config or unwritable output. Maps to exit 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One requested verifier. `params` holds the per-test overrides.
struct TestRequest {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

enum class SeriesFormat { kCsv, kJson };

struct ExperimentConfig {
  ProcessSpec spec;
  std::size_t n_paths = 1000;
  std::size_t horizon = 100;
  std::optional<std::uint64_t> seed;
  double alpha = 0.01;
  std::vector<TestRequest> tests;
  std::string output = "pcid_out";
  SeriesFormat format = SeriesFormat::kCsv;
  std::vector<std::string> record;
};

/// Strict parse: unknown keys, unknown verifiers and unknown series throw
/// ConfigError; spec problems surface as SpecError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Command-line overrides; they win over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_paths;
  std::optional<std::size_t> horizon;
  std::optional<std::string> output;
};

/// Seed precedence: override, config, PCID_SEED, 0.
void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides);

struct ExperimentResult {
  std::vector<TestVerdict> verdicts;
  nlohmann::json report;
  std::string summary;
  bool all_pass = false;
};

/// Runs every requested verifier. The report carries no thread count or
/// timing, so it is byte-identical for any `threads`.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// Writes report.json, summary.txt and the requested series files into
/// config.output. Throws IoError.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   unsigned threads = 0);

/// Fails early with IoError when `dir` cannot be created or written.
void ensure_writable(const std::filesystem::path& dir);

/// Series that `record` may name, sorted.
std::vector<std::string> series_names();

/// Sorted "name: description" lines.
std::vector<std::string> list_specs();
std::vector<std::string> list_tests();

}  // namespace pcid
