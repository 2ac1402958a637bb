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

#ifndef CWSC_EXPERIMENTS_HPP_
#define CWSC_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cwsc/spectral.hpp"

namespace cwsc {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class ExperimentKind {
  kMagnetization,
  kMeasure,
  kSpectrumLadder,
  kLemmaA5,
  kLaplaceZ,
  kLargeDeviation,
  kMomentsX,
  kMomentsY,
  kDefinettiIdentity,
  kInterlacing,
};

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(const std::string& name);

// A fully seeded experiment description. Every run is determined by
// (config, base_seed); result tables are byte-identical across runs on the
// same platform.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kMagnetization;
  double beta = 2.0;
  double alpha = 2.0;
  std::vector<std::int64_t> n_ladder;  // empty = per-kind default
  std::vector<int> ell;                // empty = per-kind default
  std::int64_t replicas = 0;           // 0 = per-kind default
  std::vector<double> beta_list;       // magnetization / definetti-identity
  std::vector<double> a_values;        // large-deviation
  std::vector<std::int64_t> spin_counts;  // definetti-identity M values
  std::int64_t intervals = 200;        // interlacing intervals per pair
  int bins = 40;                       // histogram bins
  std::uint64_t base_seed = 42;
  std::string output_dir;              // empty = $CWSC_OUT or "out"
  std::string format = "csv";          // csv | json (verification reports)
  int jobs = 0;                        // 0 = all hardware threads

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load_file(const std::string& path);
  nlohmann::json to_json() const;
};

struct ExperimentOutcome {
  bool all_passed = true;
  std::vector<std::string> summary_lines;  // one "PASS/FAIL ..." per check
  std::vector<std::string> files_written;  // relative to output_dir
};

/// Runs the experiment, persisting per-metric tables, a summary and a
/// manifest (config echo, artifact version, seed, content hashes) under
/// config.output_dir. Partial outputs are removed on failure.
ExperimentOutcome run(const ExperimentConfig& config);

/// Names and one-line descriptions of all experiment kinds.
std::vector<std::string> list_experiments();

/// Pooled eigenvalue histogram: bin edges, counts, normalized density and
/// the semicircle density at bin centers. bins >= 10, input non-empty.
void emit_histogram(std::ostream& os, const std::vector<Spectrum>& spectra,
                    int bins);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a64_hex_file(const std::string& path);

/// Locale-independent "%.17g" formatting used for all CSV reals.
std::string format_real(double value);

/// RFC-style CSV quoting (only quotes when the field needs it).
std::string csv_field(const std::string& raw);

/// Runs body(replica) for replica in [0, count) on up to `jobs` threads
/// (0 = hardware concurrency). Exceptions are collected and rethrown.
void parallel_replicas(std::int64_t count, int jobs,
                       const std::function<void(std::int64_t)>& body);

}  // namespace cwsc

#endif  // CWSC_EXPERIMENTS_HPP_
