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

#include "wpir/harness.h"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "wpir/rng.h"
#include "wpir/wire.h"

namespace wpir {

std::uint64_t MinimumFileLength(const PirSetting& setting) {
  setting.Validate();
  return setting.file_length();
}

SessionOutcome ExecuteSession(const PirSetting& setting, int theta,
                              const MPrimeDistribution& dist, std::uint64_t seed,
                              Transport& transport, const FieldPtr& field) {
  setting.Validate();
  if (transport.servers() != setting.servers) {
    throw std::invalid_argument(fmt::format(
        "transport reaches {} servers, setting needs {}", transport.servers(),
        setting.servers));
  }
  Rng rng(seed);
  SessionOutcome out;
  out.randomness = SampleWpirRandomness(setting, theta, dist, *field, rng);
  RetrievalTranscript& t = out.transcript;
  t.theta = theta;
  t.seed = seed;
  t.queries = WpirQuery(setting, theta, out.randomness, *field);
  for (int n = 0; n < setting.servers; ++n) {
    const Bytes query = Frame(EncodeQuery(t.queries[n], *field));
    const Bytes reply = transport.Exchange(n, query);
    t.answers.push_back(DecodeAnswer(Unframe(reply), *field));
    const std::uint64_t answer_bytes =
        t.answers.back().symbols.size() * field->bytes_per_symbol();
    t.framing_bytes += query.size() + (reply.size() - answer_bytes);
  }
  out.file = WpirDecode(setting, theta, out.randomness, t.answers, field);
  return out;
}

RetrievalTranscript RunSession(const PirSetting& setting, int theta,
                               const MPrimeDistribution& dist, std::uint64_t seed,
                               Transport& transport, const FileLibrary& truth) {
  SessionOutcome out =
      ExecuteSession(setting, theta, dist, seed, transport, truth.field());
  const auto expected = truth.file(theta);
  if (!std::equal(out.file.begin(), out.file.end(), expected.begin(),
                  expected.end())) {
    throw DecodeMismatch(fmt::format("decoded file {} differs from W_{} ({}, seed {})",
                                     theta, theta, setting.ToString(), seed));
  }
  return std::move(out.transcript);
}

FileLibrary GenerateSessionLibrary(const PirSetting& setting,
                                   const FieldPtr& field, std::uint64_t seed) {
  return GenerateLibrary(setting.files, MinimumFileLength(setting), field, seed);
}

void ExperimentConfig::Validate() const {
  setting.Validate();
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (dist.files() != setting.files) {
    throw std::invalid_argument(fmt::format(
        "dist.pmf has {} entries but M = {}", dist.files(), setting.files));
  }
  if (leakage_samples == 0) {
    throw std::invalid_argument("leakage.samples must be positive");
  }
  const FieldPtr f = Field::Parse(field);
  if (setting.variant != Variant::kReplicated &&
      f->order() <= static_cast<std::uint32_t>(setting.servers)) {
    throw std::invalid_argument(fmt::format(
        "{} needs more than N = {} field elements", f->Name(), setting.servers));
  }
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const FieldPtr field = Field::Parse(config.field);
  const PirSetting& setting = config.setting;
  const Rng root(config.seed);
  auto library = std::make_shared<const FileLibrary>(
      GenerateSessionLibrary(setting, field, root.Substream("library").seed()));
  InProcessTransport transport(ProvisionServers(setting, library), field);

  ExperimentResult result;
  result.config = config;
  result.trials.resize(config.trials);
  const Rng trial_root = root.Substream("trial");

  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&](std::uint64_t first, std::uint64_t stride) {
    try {
      for (std::uint64_t i = first; i < config.trials; i += stride) {
        const Rng trial = trial_root.Substream(i);
        Rng theta_rng = trial.Substream("theta");
        const int theta = 1 + static_cast<int>(theta_rng.UniformInt(setting.files));
        const std::uint64_t session_seed = trial.Substream("session").seed();
        SessionOutcome out = ExecuteSession(setting, theta, config.dist,
                                            session_seed, transport, field);
        const auto expected = library->file(theta);
        if (!std::equal(out.file.begin(), out.file.end(), expected.begin(),
                        expected.end())) {
          throw DecodeMismatch(
              fmt::format("trial {}: decoded file differs from W_{}", i, theta));
        }
        TrialRecord& rec = result.trials[i];
        rec.index = i;
        rec.theta = theta;
        rec.m_prime = out.randomness.m_prime;
        rec.download_bits = out.transcript.download_bits();
        rec.framing_bytes = out.transcript.framing_bytes;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  const auto workers = static_cast<std::uint64_t>(
      std::min<std::uint64_t>(config.threads, config.trials));
  if (workers <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  long double total = 0;
  for (const TrialRecord& r : result.trials) total += r.download_bits;
  result.mean_download_bits = static_cast<double>(total / config.trials);
  result.file_bits = library->length() * field->bits_per_symbol();
  result.empirical_rate = result.mean_download_bits > 0
                              ? result.file_bits / result.mean_download_bits
                              : 0;
  result.analytic_rate = WpirRate(setting, config.dist);

  LeakageOptions options;
  options.method = config.leakage_method;
  options.samples = config.leakage_samples;
  options.seed = root.Substream("leakage").seed();
  options.threads = config.threads;
  for (Metric m : config.metrics) {
    result.leakage.push_back(EmpiricalLeakage(setting, config.dist, m,
                                              setting.collusion_size(), options));
  }

  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.output_dir.empty()) PersistResult(result, config.output_dir);
  return result;
}

std::string TrialsCsv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "trial,theta,m_prime,download_bits,framing_bytes\n";
  for (const TrialRecord& r : result.trials) {
    out << fmt::format("{},{},{},{},{}\n", r.index, r.theta, r.m_prime,
                       r.download_bits, r.framing_bytes);
  }
  return out.str();
}

std::string ResultJson(const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const ExperimentConfig& c = result.config;
  ordered_json config;
  config["setting"] = {{"variant", VariantName(c.setting.variant)},
                       {"N", c.setting.servers},
                       {"M", c.setting.files},
                       {"r", c.setting.r}};
  config["field"] = Field::Parse(c.field)->Name();
  config["dist"] = c.dist.ToString();
  config["trials"] = c.trials;
  config["seed"] = c.seed;
  config["threads"] = c.threads;
  ordered_json metrics = ordered_json::array();
  for (Metric m : c.metrics) metrics.push_back(MetricName(m));
  config["metrics"] = metrics;
  config["leakage_method"] = MethodName(c.leakage_method);
  config["leakage_samples"] = c.leakage_samples;

  ordered_json doc;
  doc["config"] = config;
  doc["file_bits"] = result.file_bits;
  doc["mean_download_bits"] = result.mean_download_bits;
  doc["empirical_rate"] = result.empirical_rate;
  doc["analytic_rate"] = ToString(result.analytic_rate);
  doc["analytic_rate_value"] = ToDouble(result.analytic_rate);
  ordered_json leakage = ordered_json::array();
  for (const LeakageReport& r : result.leakage) {
    leakage.push_back({{"metric", MetricName(r.metric)},
                       {"analytic", r.analytic_value},
                       {"empirical", r.empirical_value},
                       {"method", MethodName(r.method)},
                       {"samples", r.sample_count},
                       {"cells", r.cells},
                       {"threshold", r.tv_threshold},
                       {"agrees", r.Agrees()}});
  }
  doc["leakage"] = leakage;
  ordered_json bits = ordered_json::array();
  for (const TrialRecord& r : result.trials) bits.push_back(r.download_bits);
  doc["download_bits"] = bits;
  return doc.dump(2) + "\n";
}

void PersistResult(const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error(
        fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  write(dir / "trials.csv", TrialsCsv(result));
  write(dir / "result.json", ResultJson(result));
}

}  // namespace wpir
