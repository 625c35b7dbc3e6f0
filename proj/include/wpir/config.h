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

// Flat `key = value` experiment configs. '#' starts a comment. Keys:
//
//   setting.variant   replicated | mds | tcollusion    (required)
//   setting.N         servers                          (required)
//   setting.M         files                            (required)
//   setting.K         MDS dimension, only for mds      (required there)
//   setting.T         collusion size, only for tcollusion (required there)
//   field             e.g. gf256, gf2^4, prime:7       (default gf256)
//   dist.pmf          e.g. 0.5,0.5 or 1/3,0,2/3        (default point at M-1)
//   trials, seed, threads
//   leakage.metrics   comma list of mil, maxl
//   leakage.method    exhaustive | montecarlo
//   leakage.samples
//   output.dir
#ifndef WPIR_CONFIG_H_
#define WPIR_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "wpir/harness.h"

namespace wpir {

// Key/value pairs in file order; throws std::invalid_argument naming the
// line for syntax errors and duplicate keys.
std::map<std::string, std::string> ParseKeyValues(const std::string& text);

// Throws std::invalid_argument for unknown keys, missing required keys, or a
// K/T key given for a variant that does not take it.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// The WPIR_SEED environment variable, if set.
std::optional<std::uint64_t> SeedFromEnvironment();
// Replaces config.seed with WPIR_SEED when set.
void ApplySeedOverride(ExperimentConfig& config);

std::string FormatConfig(const ExperimentConfig& config);

}  // namespace wpir

#endif  // WPIR_CONFIG_H_
