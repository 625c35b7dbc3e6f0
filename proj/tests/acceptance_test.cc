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

// Acceptance checks. Each criterion prints exactly one PASS or FAIL line;
// the process exits non-zero if any criterion fails.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wpir/core.h"
#include "wpir/harness.h"
#include "wpir/leakage.h"
#include "wpir/rng.h"
#include "wpir/setting.h"
#include "wpir/tradeoff.h"
#include "wpir/transport.h"
#include "wpir/wpir.h"

namespace wpir {
namespace {

// Pinned tolerances.
constexpr double kExactLeakageTol = 1e-10;
constexpr double kRateRelTol = 0.01;
constexpr double kSearchRateTol = 1e-6;
constexpr double kSearchResolution = 1e-2;
constexpr std::uint64_t kPrivacySamples = 100000;
constexpr std::uint64_t kLeakageSamples = 100000;
constexpr std::uint64_t kExperimentTrials = 10000;
constexpr int kDecodeSessions = 100;

struct Outcome {
  bool ok = true;
  std::string detail;

  void Require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void Criterion(int id, const std::string& name, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed >= budget_seconds) {
    out.Require(false, fmt::format("over time budget {:.0f} s", budget_seconds));
  }
  if (!out.ok) ++failures;
  fmt::print("{} [{}] {}: {} ({:.2f} s, budget {:.0f} s)\n", out.ok ? "PASS" : "FAIL", id,
             name, out.detail.empty() ? "ok" : out.detail, elapsed, budget_seconds);
  std::fflush(stdout);
}

LeakageOptions Exhaustive() { return LeakageOptions{}; }

LeakageOptions MonteCarlo(std::uint64_t samples, std::uint64_t seed) {
  LeakageOptions o;
  o.method = Method::kMonteCarlo;
  o.samples = samples;
  o.seed = seed;
  return o;
}

MPrimeDistribution Uniform(int m) {
  return MPrimeDistribution(std::vector<Rational>(m, Rational(1, m)));
}

std::vector<PirSetting> CorrectnessSettings() {
  return {PirSetting::Replicated(2, 2), PirSetting::Replicated(2, 3),
          PirSetting::Replicated(3, 2), PirSetting::Replicated(3, 3),
          PirSetting::Mds(3, 2, 2),     PirSetting::Mds(5, 3, 2),
          PirSetting::TCollusion(3, 2, 2)};
}

Outcome CapacityReproduction() {
  Outcome out;
  const std::vector<std::pair<PirSetting, Rational>> cases = {
      {PirSetting::Replicated(2, 2), Rational(2, 3)},
      {PirSetting::Replicated(3, 2), Rational(3, 4)},
      {PirSetting::TCollusion(3, 2, 2), Rational(3, 5)},
      {PirSetting::Mds(5, 3, 2), Rational(5, 8)}};
  std::string shown;
  for (const auto& [s, want] : cases) {
    const Rational got = Capacity(s);
    shown += (shown.empty() ? "" : " ") + ToString(got);
    out.Require(got == want, s.ToString() + " gave " + ToString(got));
  }
  out.detail = out.ok ? "capacities " + shown : out.detail;
  return out;
}

Outcome ExactBasePrivacy() {
  Outcome out;
  const PrivacyCheck c = BasePrivacyCheck(PirSetting::Replicated(2, 2), std::nullopt, Exhaustive());
  out.Require(c.max_tv == 0, fmt::format("max TV {}", c.max_tv));
  out.Require(c.uniform_posteriors, "posterior not uniform");
  // Two independent permutations of the 4 segments: 24^2 realizations.
  out.Require(c.samples == 576, fmt::format("{} realizations per theta", c.samples));
  out.Require(c.conditional_entropy == 1.0,
              fmt::format("H(theta|Q) = {:.17g}", c.conditional_entropy));
  if (out.ok) out.detail = fmt::format("{} realizations, TV = 0, H(theta|Q) = 1 bit", c.samples);
  return out;
}

Outcome StatisticalBasePrivacy() {
  Outcome out;
  std::string shown;
  for (const PirSetting& s : {PirSetting::TCollusion(3, 2, 2), PirSetting::Mds(3, 2, 2)}) {
    const PrivacyCheck c = BasePrivacyCheck(s, std::nullopt, MonteCarlo(kPrivacySamples, 3));
    out.Require(c.Passed(), fmt::format("{} TV {:.4g} > {:.4g}", s.ToString(), c.max_tv,
                                        c.threshold));
    shown += fmt::format("{}{} TV {:.4f} <= {:.4f}", shown.empty() ? "" : ", ", s.ToString(),
                         c.max_tv, c.threshold);
  }
  if (out.ok) out.detail = shown;
  return out;
}

Outcome Correctness() {
  Outcome out;
  int sessions = 0;
  for (const PirSetting& s : CorrectnessSettings()) {
    const FieldPtr f = Field::Default();
    auto library =
        std::make_shared<const FileLibrary>(GenerateSessionLibrary(s, f, 1000 + s.servers));
    InProcessTransport transport(ProvisionServers(s, library), f);
    const MPrimeDistribution dist = Uniform(s.files);
    int exact = 0, clean = 0, base = 0;
    Rng rng(17);
    for (int i = 0; i < kDecodeSessions; ++i) {
      const int theta = 1 + static_cast<int>(rng.UniformInt(s.files));
      const SessionOutcome o = ExecuteSession(s, theta, dist, rng.Next(), transport, f);
      const auto truth = library->file(theta);
      exact += std::equal(o.file.begin(), o.file.end(), truth.begin(), truth.end());
      (o.randomness.m_prime == 0 ? clean : base) += 1;
    }
    sessions += kDecodeSessions;
    out.Require(exact == kDecodeSessions,
                fmt::format("{} decoded {}/{}", s.ToString(), exact, kDecodeSessions));
    out.Require(clean > 0 && base > 0, s.ToString() + " did not cover both paths");
  }
  if (out.ok) {
    out.detail = fmt::format("{} sessions over {} settings, all exact, both paths", sessions,
                             CorrectnessSettings().size());
  }
  return out;
}

Outcome LeakageAgreement() {
  Outcome out;
  int exhaustive = 0, sampled = 0;
  double worst = 0;
  for (const PirSetting& s : {PirSetting::Replicated(2, 2), PirSetting::Replicated(3, 2)}) {
    for (const auto& d : {MPrimeDistribution::PointMass(2, 0), MPrimeDistribution::PointMass(2, 1),
                          MPrimeDistribution::Parse("1/2,1/2")}) {
      for (Metric m : {Metric::kMil, Metric::kMaxl}) {
        const LeakageReport r = EmpiricalLeakage(s, d, m, 1, Exhaustive());
        const double gap = std::abs(r.empirical_value - r.analytic_value);
        worst = std::max(worst, gap);
        out.Require(gap <= kExactLeakageTol,
                    fmt::format("{} {} {}: gap {:.3g}", s.ToString(), d.ToString(),
                                MetricName(m), gap));
        ++exhaustive;
      }
    }
  }
  for (const PirSetting& s : {PirSetting::Mds(5, 3, 2), PirSetting::Mds(3, 2, 2),
                              PirSetting::TCollusion(3, 2, 2)}) {
    for (const auto& d : {MPrimeDistribution::PointMass(2, 0), MPrimeDistribution::Parse("1/2,1/2")}) {
      for (Metric m : {Metric::kMil, Metric::kMaxl}) {
        const LeakageReport r =
            EmpiricalLeakage(s, d, m, s.collusion_size(), MonteCarlo(kLeakageSamples, 5));
        out.Require(r.Agrees(), s.ToString() + " " + r.ToString());
        ++sampled;
      }
    }
  }
  if (out.ok) {
    out.detail = fmt::format("{} exhaustive (max gap {:.2g} <= 1e-10), {} Monte-Carlo within "
                             "4 sqrt(C/n)",
                             exhaustive, worst, sampled);
  }
  return out;
}

Outcome CurveEndpoints() {
  Outcome out;
  auto check_ends = [&](const PirSetting& s, Metric m, double x_end, bool normalized,
                        const Rational& r0) {
    const auto curve = SweepCurve(s, m, 101);
    const TradeoffPoint& first = curve.front();
    const TradeoffPoint& last = curve.back();
    const double x = normalized ? last.rho_normalized : last.rho_achieved;
    const std::string tag = s.ToString() + " " + MetricName(m);
    out.Require(first.rho_achieved == 0 && first.rate == r0, tag + " start");
    out.Require(last.rate == 1, tag + " end rate " + ToString(last.rate));
    out.Require(std::abs(x - x_end) < 1e-12, fmt::format("{} end x {:.15g}", tag, x));
  };
  check_ends(PirSetting::Replicated(3, 2), Metric::kMil, 1.0 / 3, true, Rational(3, 4));
  check_ends(PirSetting::TCollusion(3, 2, 2), Metric::kMil, 2.0 / 3, true, Rational(3, 5));
  check_ends(PirSetting::TCollusion(3, 2, 2), Metric::kMaxl, std::log2(5.0 / 3), true,
             Rational(3, 5));
  check_ends(PirSetting::Mds(5, 3, 2), Metric::kMaxl, std::log2(8.0 / 5), false,
             Rational(5, 8));
  const double sat = SaturationLeakage(PirSetting::TCollusion(3, 2, 2), Metric::kMaxl);
  out.Require(std::abs(sat - 0.737) < 5e-4, fmt::format("MaxL saturation {:.4f}", sat));
  const TradeoffPoint mid =
      TheoremTradeoff(PirSetting::Replicated(3, 2), Metric::kMil, Rational(1, 6));
  out.Require(mid.rate == Rational(6, 7), "interior rate " + ToString(mid.rate));
  if (out.ok) {
    out.detail = fmt::format("endpoints exact, MaxL saturation {:.4f}, rate 6/7 at rho = 1/6",
                             sat);
  }
  return out;
}

Outcome EmpiricalRate() {
  Outcome out;
  double worst = 0;
  for (const PirSetting& s : CorrectnessSettings()) {
    ExperimentConfig c;
    c.setting = s;
    c.dist = Uniform(s.files);
    c.trials = kExperimentTrials;
    c.seed = 23;
    const ExperimentResult r = RunExperiment(c);
    const double want = ToDouble(WpirRate(s, c.dist));
    const double rel = std::abs(r.empirical_rate - want) / want;
    worst = std::max(worst, rel);
    out.Require(rel <= kRateRelTol, fmt::format("{} empirical {:.6f} vs {:.6f}", s.ToString(),
                                                r.empirical_rate, want));
  }
  if (out.ok) out.detail = fmt::format("worst relative gap {:.4f} <= 0.01", worst);
  return out;
}

Outcome TwoPointOptimality() {
  Outcome out;
  int searches = 0;
  for (int m : {2, 3}) {
    const PirSetting s = PirSetting::Replicated(3, m);
    for (Metric metric : {Metric::kMil, Metric::kMaxl}) {
      for (double p0 : {0.25, 0.5, 0.75}) {
        // Budgets chosen so the optimal p0 lies on the grid.
        const double rho = metric == Metric::kMil
                               ? p0 * s.r * std::log2(m) / s.servers
                               : std::log2(1 + p0 * s.r * (m - 1) / s.servers);
        const DistSearchResult r = NumericDistSearch(s, metric, rho, kSearchResolution);
        const Rational theory = TheoremTradeoff(s, metric, rho).rate;
        const std::string tag =
            fmt::format("{} {} rho={:.4f}", s.ToString(), MetricName(metric), rho);
        out.Require(r.TwoPointSupport(),
                    tag + " counterexample " + r.best.ToString());
        out.Require(r.off_support_maximizers == 0,
                    fmt::format("{} {} maximizers off {{0, M-1}}", tag, r.off_support_maximizers));
        out.Require(std::abs(ToDouble(r.rate) - ToDouble(theory)) <= kSearchRateTol,
                    tag + " rate " + ToString(r.rate) + " vs " + ToString(theory));
        ++searches;
      }
    }
  }
  if (out.ok) out.detail = fmt::format("{} searches, all optima on {{0, M-1}}", searches);
  return out;
}

Outcome ReductionIdentity() {
  Outcome out;
  const PirSetting t = PirSetting::TCollusion(3, 2, 2);
  const PirSetting k = PirSetting::Mds(3, 2, 2);
  for (Metric m : {Metric::kMil, Metric::kMaxl}) {
    const auto a = SweepCurve(t, m, 101);
    const auto b = SweepCurve(k, m, 101);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].rate == b[i].rate && a[i].rho_achieved == b[i].rho_achieved &&
             a[i].p0 == b[i].p0;
    }
    out.Require(same, MetricName(m) + " curves differ");
  }
  Rng rng(2026);
  for (int i = 0; i < 20; ++i) {
    const auto n0 = rng.UniformInt(1000), n1 = rng.UniformInt(1000) + 1;
    const MPrimeDistribution d(
        {Rational(static_cast<long long>(n0), static_cast<long long>(n0 + n1)),
         Rational(static_cast<long long>(n1), static_cast<long long>(n0 + n1))});
    for (Metric m : {Metric::kMil, Metric::kMaxl}) {
      out.Require(AnalyticLeakage(t, d, m) == AnalyticLeakage(k, d, m),
                  d.ToString() + " " + MetricName(m) + " leakage differs");
    }
    out.Require(WpirRate(t, d) == WpirRate(k, d), d.ToString() + " rate differs");
  }
  if (out.ok) out.detail = "curves identical, 20 random pmfs identical in rate and leakage";
  return out;
}

}  // namespace
}  // namespace wpir

int main() {
  using namespace wpir;
  Criterion(1, "capacity reproduction", 1, CapacityReproduction);
  Criterion(2, "exact base-scheme privacy", 10, ExactBasePrivacy);
  Criterion(3, "statistical base-scheme privacy", 120, StatisticalBasePrivacy);
  Criterion(4, "correctness", 60, Correctness);
  Criterion(5, "leakage agreement", 300, LeakageAgreement);
  Criterion(6, "trade-off curve endpoints", 5, CurveEndpoints);
  Criterion(7, "empirical rate", 120, EmpiricalRate);
  Criterion(8, "two-point optimality", 300, TwoPointOptimality);
  Criterion(9, "reduction identity", 5, ReductionIdentity);
  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
