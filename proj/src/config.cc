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

#include "wpir/config.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace wpir {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!value.empty() && value[0] != '-') v = std::stoull(value, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (value.empty() || used != value.size()) {
    throw std::invalid_argument(
        fmt::format("{} expects a non-negative integer, got '{}'", key, value));
  }
  return v;
}

int ParseInt(const std::string& key, const std::string& value) {
  const std::uint64_t v = ParseUnsigned(key, value);
  if (v > 1'000'000) throw std::invalid_argument(key + " is out of range");
  return static_cast<int>(v);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

std::map<std::string, std::string> ParseKeyValues(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt::format("line {}: expected key = value", number));
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(fmt::format("line {}: empty key", number));
    if (!out.emplace(key, value).second) {
      throw std::invalid_argument(fmt::format("line {}: duplicate key '{}'", number, key));
    }
  }
  return out;
}

ExperimentConfig ParseConfig(const std::string& text) {
  auto kv = ParseKeyValues(text);
  static const std::set<std::string> kKnown = {
      "setting.variant", "setting.N",      "setting.M",       "setting.K",
      "setting.T",       "field",          "dist.pmf",        "trials",
      "seed",            "threads",        "leakage.metrics", "leakage.method",
      "leakage.samples", "output.dir"};
  for (const auto& [key, value] : kv) {
    if (!kKnown.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing config key '" + key + "'");
    return it->second;
  };

  const Variant variant = ParseVariant(require("setting.variant"));
  const int n = ParseInt("setting.N", require("setting.N"));
  const int m = ParseInt("setting.M", require("setting.M"));
  const bool has_k = kv.count("setting.K") > 0;
  const bool has_t = kv.count("setting.T") > 0;
  if (has_k != (variant == Variant::kMds)) {
    throw std::invalid_argument(has_k ? "setting.K is only valid for mds"
                                      : "mds requires setting.K");
  }
  if (has_t != (variant == Variant::kTCollusion)) {
    throw std::invalid_argument(has_t ? "setting.T is only valid for tcollusion"
                                      : "tcollusion requires setting.T");
  }

  ExperimentConfig config;
  switch (variant) {
    case Variant::kReplicated:
      config.setting = PirSetting::Replicated(n, m);
      break;
    case Variant::kMds:
      config.setting = PirSetting::Mds(n, ParseInt("setting.K", kv["setting.K"]), m);
      break;
    case Variant::kTCollusion:
      config.setting =
          PirSetting::TCollusion(n, ParseInt("setting.T", kv["setting.T"]), m);
      break;
  }
  config.dist = kv.count("dist.pmf") ? MPrimeDistribution::Parse(kv["dist.pmf"])
                                     : MPrimeDistribution::PointMass(m, m - 1);
  if (kv.count("field")) config.field = kv["field"];
  if (kv.count("trials")) config.trials = ParseUnsigned("trials", kv["trials"]);
  if (kv.count("seed")) config.seed = ParseUnsigned("seed", kv["seed"]);
  if (kv.count("threads")) config.threads = ParseInt("threads", kv["threads"]);
  if (kv.count("leakage.metrics")) {
    for (const std::string& name : SplitList(kv["leakage.metrics"])) {
      config.metrics.push_back(ParseMetric(name));
    }
  }
  if (kv.count("leakage.method")) config.leakage_method = ParseMethod(kv["leakage.method"]);
  if (kv.count("leakage.samples")) {
    config.leakage_samples = ParseUnsigned("leakage.samples", kv["leakage.samples"]);
  }
  if (kv.count("output.dir")) config.output_dir = kv["output.dir"];
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::optional<std::uint64_t> SeedFromEnvironment() {
  const char* raw = std::getenv("WPIR_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  return ParseUnsigned("WPIR_SEED", Trim(raw));
}

void ApplySeedOverride(ExperimentConfig& config) {
  if (auto seed = SeedFromEnvironment()) config.seed = *seed;
}

std::string FormatConfig(const ExperimentConfig& config) {
  const PirSetting& s = config.setting;
  std::string out = fmt::format("setting.variant = {}\nsetting.N = {}\nsetting.M = {}\n",
                                VariantName(s.variant), s.servers, s.files);
  if (s.variant == Variant::kMds) out += fmt::format("setting.K = {}\n", s.r);
  if (s.variant == Variant::kTCollusion) out += fmt::format("setting.T = {}\n", s.r);
  out += fmt::format("field = {}\ndist.pmf = {}\ntrials = {}\nseed = {}\nthreads = {}\n",
                     config.field, config.dist.ToString(), config.trials, config.seed,
                     config.threads);
  if (!config.metrics.empty()) {
    std::string names;
    for (Metric m : config.metrics) {
      if (!names.empty()) names += ",";
      names += MetricName(m);
    }
    out += "leakage.metrics = " + names + "\n";
  }
  out += fmt::format("leakage.method = {}\nleakage.samples = {}\n",
                     MethodName(config.leakage_method), config.leakage_samples);
  if (!config.output_dir.empty()) out += "output.dir = " + config.output_dir + "\n";
  return out;
}

}  // namespace wpir
