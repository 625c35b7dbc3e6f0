// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Retrieval sessions and repeated-trial experiments.
#ifndef WPIR_HARNESS_H_
#define WPIR_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpir/core.h"
#include "wpir/leakage.h"
#include "wpir/rational.h"
#include "wpir/setting.h"
#include "wpir/transport.h"
#include "wpir/wpir.h"

namespace wpir {

// The decoded file differs from the stored one.
class DecodeMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Smallest file length every server layout of `setting` accepts: K * N^M
// for MDS storage, N^M otherwise.
std::uint64_t MinimumFileLength(const PirSetting& setting);

struct SessionOutcome {
  RetrievalTranscript transcript;
  WpirRandomness randomness;
  std::vector<Symbol> file;
};

// One retrieval of file theta through `transport`, with randomness drawn
// from `seed`. Download accounting covers answer payloads only; frame
// headers and query bytes go to framing_bytes.
SessionOutcome ExecuteSession(const PirSetting& setting, int theta,
                              const MPrimeDistribution& dist, std::uint64_t seed,
                              Transport& transport, const FieldPtr& field);

// ExecuteSession plus verification against `truth`; throws DecodeMismatch.
RetrievalTranscript RunSession(const PirSetting& setting, int theta,
                               const MPrimeDistribution& dist, std::uint64_t seed,
                               Transport& transport, const FileLibrary& truth);

// Library shared by every server and by fetch-side verification.
FileLibrary GenerateSessionLibrary(const PirSetting& setting,
                                   const FieldPtr& field, std::uint64_t seed);

struct ExperimentConfig {
  PirSetting setting = PirSetting::Replicated(2, 2);
  std::string field = "gf256";
  MPrimeDistribution dist = MPrimeDistribution::PointMass(2, 1);
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<Metric> metrics;
  Method leakage_method = Method::kExhaustive;
  std::uint64_t leakage_samples = 100000;
  // Results go to <output_dir>/trials.csv and <output_dir>/result.json when
  // non-empty.
  std::string output_dir;

  // Throws std::invalid_argument when inconsistent.
  void Validate() const;
};

struct TrialRecord {
  std::uint64_t index = 0;
  int theta = 1;
  int m_prime = 0;
  std::uint64_t download_bits = 0;
  std::uint64_t framing_bytes = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t file_bits = 0;  // L * ceil(log2 q)
  double mean_download_bits = 0;
  double empirical_rate = 0;
  Rational analytic_rate = 0;
  std::vector<LeakageReport> leakage;
  std::vector<TrialRecord> trials;
  double wall_clock_seconds = 0;  // not persisted
};

// Runs config.trials sessions over the in-process transport. Trial i draws
// theta and its session seed from substream i of the config seed, so the
// result does not depend on the thread count.
ExperimentResult RunExperiment(const ExperimentConfig& config);

std::string TrialsCsv(const ExperimentResult& result);
std::string ResultJson(const ExperimentResult& result);
// Writes trials.csv and result.json under `dir`, creating it if needed.
void PersistResult(const ExperimentResult& result,
                   const std::filesystem::path& dir);

}  // namespace wpir

#endif  // WPIR_HARNESS_H_
