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

// wpirlab: command-line front end.
//
//   wpirlab capacity --setting replicated -N 2 -M 2
//   wpirlab run --config exp.conf
//   wpirlab sweep --setting mds -N 5 -K 3 -M 2 --metric maxl --out curve.csv
//   wpirlab leakage --setting replicated -N 3 -M 2 --dist 0.5,0.5
//   wpirlab verify
//   wpirlab serve --setting replicated -N 3 -M 2 --server 0 --port 7000
//   wpirlab fetch --setting replicated -N 3 -M 2 --servers :7000,:7001,:7002

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wpir/config.h"
#include "wpir/harness.h"
#include "wpir/leakage.h"
#include "wpir/setting.h"
#include "wpir/tradeoff.h"
#include "wpir/transport.h"
#include "wpir/wire.h"
#include "wpir/wpir.h"

namespace {

using namespace wpir;

struct SettingFlags {
  std::string variant = "replicated";
  int n = 2;
  int m = 2;
  std::optional<int> k;
  std::optional<int> t;

  void Register(CLI::App* app) {
    app->add_option("--setting", variant, "replicated | mds | tcollusion")
        ->capture_default_str();
    app->add_option("-N", n, "servers")->capture_default_str();
    app->add_option("-M", m, "files")->capture_default_str();
    app->add_option("-K", k, "MDS dimension (mds only)");
    app->add_option("-T", t, "collusion size (tcollusion only)");
  }

  PirSetting Build() const {
    const Variant v = ParseVariant(variant);
    if (k && v != Variant::kMds) throw std::invalid_argument("-K only applies to mds");
    if (t && v != Variant::kTCollusion) {
      throw std::invalid_argument("-T only applies to tcollusion");
    }
    PirSetting s;
    switch (v) {
      case Variant::kReplicated:
        s = PirSetting::Replicated(n, m);
        break;
      case Variant::kMds:
        if (!k) throw std::invalid_argument("mds requires -K");
        s = PirSetting::Mds(n, *k, m);
        break;
      case Variant::kTCollusion:
        if (!t) throw std::invalid_argument("tcollusion requires -T");
        s = PirSetting::TCollusion(n, *t, m);
        break;
    }
    s.Validate();
    return s;
  }
};

MPrimeDistribution DistFor(const PirSetting& s, const std::string& text) {
  if (text.empty()) return MPrimeDistribution::PointMass(s.files, s.files - 1);
  MPrimeDistribution d = MPrimeDistribution::Parse(text);
  if (d.files() != s.files) {
    throw std::invalid_argument(
        fmt::format("--dist has {} entries but M = {}", d.files(), s.files));
  }
  return d;
}

std::vector<Metric> MetricsFor(const std::vector<std::string>& names) {
  std::vector<Metric> out;
  for (const auto& n : names) out.push_back(ParseMetric(n));
  if (out.empty()) out = {Metric::kMil, Metric::kMaxl};
  return out;
}

int RunCapacity(const SettingFlags& flags, bool decimal) {
  const PirSetting s = flags.Build();
  const Rational c = Capacity(s);
  if (decimal) {
    fmt::print("{} {:.17g}\n", ToString(c), ToDouble(c));
  } else {
    fmt::print("{}\n", ToString(c));
  }
  return 0;
}

struct RunFlags {
  std::string config;
  std::string dist;
  std::string field = "gf256";
  std::vector<std::string> metrics;
  std::string method = "exhaustive";
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out;
};

int RunRun(const SettingFlags& flags, const RunFlags& rf) {
  ExperimentConfig config;
  if (!rf.config.empty()) {
    config = LoadConfig(rf.config);
  } else {
    config.setting = flags.Build();
    config.dist = DistFor(config.setting, rf.dist);
    config.field = rf.field;
    config.threads = rf.threads;
    config.leakage_method = ParseMethod(rf.method);
    config.leakage_samples = rf.samples;
    for (const auto& n : rf.metrics) config.metrics.push_back(ParseMetric(n));
  }
  if (rf.trials) config.trials = *rf.trials;
  if (rf.seed) config.seed = *rf.seed;
  if (!rf.out.empty()) config.output_dir = rf.out;
  ApplySeedOverride(config);
  const ExperimentResult r = RunExperiment(config);
  fmt::print("setting        {}\n", config.setting.ToString());
  fmt::print("dist           {}\n", config.dist.ToString());
  fmt::print("trials         {}\n", r.trials.size());
  fmt::print("seed           {}\n", config.seed);
  fmt::print("file_bits      {}\n", r.file_bits);
  fmt::print("mean_D_bits    {:.6f}\n", r.mean_download_bits);
  fmt::print("empirical_rate {:.6f}\n", r.empirical_rate);
  fmt::print("analytic_rate  {} ({:.6f})\n", ToString(r.analytic_rate),
             ToDouble(r.analytic_rate));
  for (const LeakageReport& l : r.leakage) fmt::print("leakage        {}\n", l.ToString());
  fmt::print("wall_clock_s   {:.3f}\n", r.wall_clock_seconds);
  if (!config.output_dir.empty()) fmt::print("results        {}\n", config.output_dir);
  return 0;
}

int RunSweep(const SettingFlags& flags, const std::string& metric_name,
             std::optional<double> rho, int grid, const std::string& out) {
  const PirSetting s = flags.Build();
  const Metric metric = ParseMetric(metric_name);
  if (rho) {
    const TradeoffPoint p = TheoremTradeoff(s, metric, *rho);
    fmt::print("rho={:.17g} achieved={:.17g} normalized={:.17g} p0={} rate={} ({:.17g})\n",
               p.rho_budget, p.rho_achieved, p.rho_normalized, ToString(p.p0),
               ToString(p.rate), ToDouble(p.rate));
    return 0;
  }
  const auto points = SweepCurve(s, metric, grid);
  if (out.empty() || out == "-") {
    WriteCurveCsv(points, std::cout);
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    WriteCurveCsv(points, file);
    if (!file) throw std::runtime_error("cannot write " + out);
    fmt::print("wrote {} points to {}\n", points.size(), out);
  }
  return 0;
}

int RunLeakage(const SettingFlags& flags, const RunFlags& rf) {
  const PirSetting s = flags.Build();
  const MPrimeDistribution dist = DistFor(s, rf.dist);
  LeakageOptions options;
  options.method = ParseMethod(rf.method);
  options.samples = rf.samples;
  options.seed = rf.seed.value_or(1);
  options.threads = rf.threads;
  bool agree = true;
  for (Metric m : MetricsFor(rf.metrics)) {
    const LeakageReport r = EmpiricalLeakage(s, dist, m, s.collusion_size(), options);
    fmt::print("{} {}\n", r.Agrees() ? "agree" : "DISAGREE", r.ToString());
    agree = agree && r.Agrees();
  }
  return agree ? 0 : 1;
}

// Invariant suites for one setting: wire round trips, exact decodes over
// every M' value, analytic/empirical leakage agreement and base privacy.
int RunVerify(const std::vector<PirSetting>& settings, std::uint64_t seed,
              int decodes) {
  int failures = 0;
  auto report = [&](bool ok, const std::string& what) {
    fmt::print("{} {}\n", ok ? "PASS" : "FAIL", what);
    if (!ok) ++failures;
  };
  for (const PirSetting& s : settings) {
    const FieldPtr field = Field::Default();
    auto library = std::make_shared<const FileLibrary>(
        GenerateSessionLibrary(s, field, seed));
    const auto stores = ProvisionServers(s, library);
    InProcessTransport transport(stores, field);
    std::vector<Rational> uniform(s.files, Rational(1, s.files));
    const MPrimeDistribution dist(uniform);

    bool wire_ok = true;
    int decoded = 0;
    Rng rng(seed);
    for (int i = 0; i < decodes; ++i) {
      const int theta = 1 + static_cast<int>(rng.UniformInt(s.files));
      try {
        const RetrievalTranscript t =
            RunSession(s, theta, dist, rng.Next(), transport, *library);
        ++decoded;
        for (const QueryToken& q : t.queries) {
          wire_ok = wire_ok && DecodeQuery(EncodeQuery(q, *field), *field) == q;
        }
        for (const AnswerString& a : t.answers) {
          wire_ok = wire_ok && DecodeAnswer(EncodeAnswer(a, *field), *field) == a;
        }
      } catch (const std::exception& e) {
        fmt::print("  {}\n", e.what());
      }
    }
    report(decoded == decodes,
           fmt::format("{} decodes {}/{}", s.ToString(), decoded, decodes));
    report(wire_ok, fmt::format("{} wire round trip", s.ToString()));

    LeakageOptions options;
    options.seed = seed;
    for (Metric m : {Metric::kMil, Metric::kMaxl}) {
      const LeakageReport r = EmpiricalLeakage(s, dist, m, s.collusion_size(), options);
      report(r.Agrees(), fmt::format("{} {} analytic={:.12f} empirical={:.12f}",
                                     s.ToString(), MetricName(m), r.analytic_value,
                                     r.empirical_value));
    }
    LeakageOptions privacy;
    privacy.seed = seed;
    if (s.variant != Variant::kReplicated || IntPow(s.servers, s.files) > 4) {
      privacy.method = Method::kMonteCarlo;
      privacy.samples = 20000;
    }
    const PrivacyCheck pc = BasePrivacyCheck(s, std::nullopt, privacy);
    const std::string line = fmt::format("{} base privacy max_tv={:.6g} threshold={:.6g}",
                                         s.ToString(), pc.max_tv, pc.threshold);
    if (privacy.method == Method::kMonteCarlo && pc.threshold >= 1) {
      fmt::print("SKIP {} (more cells than samples, threshold is vacuous)\n", line);
    } else {
      report(pc.Passed(), line);
    }
  }
  fmt::print("{} failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

std::atomic<bool> g_stop{false};

int RunServe(const SettingFlags& flags, int server, const std::string& host,
             int port, std::uint64_t seed, const std::string& field_spec,
             std::uint64_t max_connections) {
  const PirSetting s = flags.Build();
  if (server < 0 || server >= s.servers) {
    throw std::invalid_argument(fmt::format("--server must lie in [0, {})", s.servers));
  }
  const FieldPtr field = Field::Parse(field_spec);
  auto library = std::make_shared<const FileLibrary>(
      GenerateSessionLibrary(s, field, seed));
  const auto stores = ProvisionServers(s, library);
  SocketServer srv(ServerHandler(stores[server], field),
                   Endpoint{host, static_cast<std::uint16_t>(port)});
  fmt::print("serving {} server {} on {}\n", s.ToString(), server,
             srv.endpoint().ToString());
  std::fflush(stdout);
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  srv.Start();
  while (!g_stop && (max_connections == 0 || srv.connections() < max_connections)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  srv.Stop();
  return 0;
}

int RunFetch(const SettingFlags& flags, const std::string& servers, int theta,
             const std::string& dist_text, std::uint64_t seed,
             std::optional<std::uint64_t> session_seed, const std::string& field_spec) {
  const PirSetting s = flags.Build();
  std::vector<Endpoint> endpoints;
  std::stringstream in(servers);
  std::string item;
  while (std::getline(in, item, ',')) endpoints.push_back(Endpoint::Parse(item));
  if (static_cast<int>(endpoints.size()) != s.servers) {
    throw std::invalid_argument(
        fmt::format("--servers lists {} endpoints, N = {}", endpoints.size(), s.servers));
  }
  const FieldPtr field = Field::Parse(field_spec);
  SocketTransport transport(endpoints);
  const FileLibrary truth = GenerateSessionLibrary(s, field, seed);
  const RetrievalTranscript t = RunSession(s, theta, DistFor(s, dist_text),
                                           session_seed.value_or(seed), transport, truth);
  std::string prefix;
  const auto file = truth.file(theta);
  for (std::size_t i = 0; i < std::min<std::size_t>(file.size(), 16); ++i) {
    prefix += fmt::format("{:02x}", file[i]);
  }
  fmt::print("fetched W_{} ({} symbols) ok, D = {} bits, framing = {} bytes, head {}\n",
             theta, file.size(), t.download_bits(), t.framing_bytes, prefix);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wpirlab: weakly-private information retrieval lab"};
  app.require_subcommand(1);

  SettingFlags setting;
  RunFlags rf;

  auto* capacity = app.add_subcommand("capacity", "print the zero-leakage capacity");
  setting.Register(capacity);
  bool decimal = false;
  capacity->add_flag("--decimal", decimal, "also print the decimal value");

  auto* run = app.add_subcommand("run", "run a repeated-trial experiment");
  setting.Register(run);
  run->add_option("--config", rf.config, "key = value config file");
  run->add_option("--dist", rf.dist, "M' pmf, e.g. 0.5,0.5");
  run->add_option("--field", rf.field, "field spec")->capture_default_str();
  run->add_option("--metric", rf.metrics, "leakage metrics to report");
  run->add_option("--method", rf.method, "exhaustive | montecarlo")->capture_default_str();
  run->add_option("--samples", rf.samples, "Monte-Carlo samples")->capture_default_str();
  run->add_option("--trials", rf.trials, "sessions to run");
  run->add_option("--seed", rf.seed, "experiment seed (WPIR_SEED overrides)");
  run->add_option("--threads", rf.threads, "worker threads")->capture_default_str();
  run->add_option("--out", rf.out, "directory for trials.csv and result.json");

  auto* sweep = app.add_subcommand("sweep", "trade-off curve as CSV");
  setting.Register(sweep);
  std::string metric = "mil";
  std::optional<double> rho;
  int grid = 101;
  std::string sweep_out;
  sweep->add_option("--metric", metric, "mil | maxl")->capture_default_str();
  sweep->add_option("--rho", rho, "print the single point at this budget");
  sweep->add_option("--grid", grid, "grid points")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");

  auto* leakage = app.add_subcommand("leakage", "analytic vs empirical leakage");
  setting.Register(leakage);
  leakage->add_option("--dist", rf.dist, "M' pmf");
  leakage->add_option("--metric", rf.metrics, "mil | maxl (default both)");
  leakage->add_option("--method", rf.method, "exhaustive | montecarlo")
      ->capture_default_str();
  leakage->add_option("--samples", rf.samples, "Monte-Carlo samples")
      ->capture_default_str();
  leakage->add_option("--seed", rf.seed, "sampling seed");
  leakage->add_option("--threads", rf.threads, "worker threads")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::vector<std::string> verify_settings;
  std::uint64_t verify_seed = 1;
  int decodes = 100;
  verify->add_option("--setting", verify_settings,
                     "settings as variant:N:M[:r]; default covers every variant");
  verify->add_option("--seed", verify_seed, "seed")->capture_default_str();
  verify->add_option("--trials", decodes, "decodes per setting")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "serve one server over TCP");
  setting.Register(serve);
  int server = 0;
  std::string host = "127.0.0.1";
  int port = 0;
  std::uint64_t library_seed = 1;
  std::string field_spec = "gf256";
  std::uint64_t max_connections = 0;
  serve->add_option("--server", server, "server index in [0, N)")->capture_default_str();
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "port (0 picks one)")->capture_default_str();
  serve->add_option("--seed", library_seed, "library generator seed")->capture_default_str();
  serve->add_option("--field", field_spec, "field spec")->capture_default_str();
  serve->add_option("--max-connections", max_connections, "exit after this many");

  auto* fetch = app.add_subcommand("fetch", "retrieve one file over TCP");
  setting.Register(fetch);
  std::string endpoints;
  int theta = 1;
  std::optional<std::uint64_t> session_seed;
  fetch->add_option("--servers", endpoints, "comma list of host:port")->required();
  fetch->add_option("--theta", theta, "file to retrieve")->capture_default_str();
  fetch->add_option("--dist", rf.dist, "M' pmf");
  fetch->add_option("--seed", library_seed, "library generator seed")->capture_default_str();
  fetch->add_option("--session-seed", session_seed, "query randomness seed");
  fetch->add_option("--field", field_spec, "field spec")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*capacity) return RunCapacity(setting, decimal);
    if (*run) return RunRun(setting, rf);
    if (*sweep) return RunSweep(setting, metric, rho, grid, sweep_out);
    if (*leakage) return RunLeakage(setting, rf);
    if (*verify) {
      std::vector<PirSetting> list;
      for (const std::string& spec : verify_settings) {
        std::vector<int> nums;
        std::stringstream in(spec);
        std::string part;
        std::getline(in, part, ':');
        const Variant v = ParseVariant(part);
        while (std::getline(in, part, ':')) nums.push_back(std::stoi(part));
        if (v == Variant::kReplicated && nums.size() == 2) {
          list.push_back(PirSetting::Replicated(nums[0], nums[1]));
        } else if (v == Variant::kMds && nums.size() == 3) {
          list.push_back(PirSetting::Mds(nums[0], nums[2], nums[1]));
        } else if (v == Variant::kTCollusion && nums.size() == 3) {
          list.push_back(PirSetting::TCollusion(nums[0], nums[2], nums[1]));
        } else {
          throw std::invalid_argument("bad --setting '" + spec + "'");
        }
      }
      if (list.empty()) {
        list = {PirSetting::Replicated(2, 2), PirSetting::Replicated(3, 3),
                PirSetting::Mds(3, 2, 2), PirSetting::TCollusion(3, 2, 2)};
      }
      return RunVerify(list, verify_seed, decodes);
    }
    if (*serve) {
      return RunServe(setting, server, host, port, library_seed, field_spec,
                      max_connections);
    }
    if (*fetch) {
      return RunFetch(setting, endpoints, theta, rf.dist, library_seed, session_seed,
                      field_spec);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
