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

// Closed-form and empirical leakage of theta to a server (or a T-subset of
// colluding servers). All logarithms are base 2 and 0 log 0 = 0.
//
// Empirical estimators run the real query generator. In exhaustive mode they
// enumerate (theta, M', S, J) with exact rational weights; in Monte-Carlo
// mode they draw sessions from seeded substreams split into a fixed number
// of shards, so the counts do not depend on thread scheduling. Theta is
// uniform in both modes (Monte-Carlo allocates samples evenly per theta).
#ifndef WPIR_LEAKAGE_H_
#define WPIR_LEAKAGE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"
#include "wpir/rational.h"
#include "wpir/setting.h"
#include "wpir/wpir.h"

namespace wpir {

enum class Metric { kMil, kMaxl };
enum class Method { kExhaustive, kMonteCarlo };

std::string MetricName(Metric m);
Metric ParseMetric(const std::string& text);
std::string MethodName(Method m);
Method ParseMethod(const std::string& text);

struct LeakageOptions {
  Method method = Method::kExhaustive;
  std::uint64_t samples = 100000;  // Monte-Carlo sessions in total
  std::uint64_t seed = 1;
  int threads = 1;
  // Field used for generated queries; null picks GF(256), or the smallest
  // binary field with more than N elements for T-collusion.
  FieldPtr field;
};

struct LeakageReport {
  Metric metric = Metric::kMil;
  double analytic_value = 0;
  double empirical_value = 0;
  Method method = Method::kExhaustive;
  std::uint64_t sample_count = 0;  // per theta; realizations when exhaustive
  std::size_t cells = 0;           // distinct (view) cells observed
  // 4 sqrt(cells / samples) for Monte-Carlo, 1e-10 for exhaustive.
  double tv_threshold = 0;

  bool Agrees() const;
  std::string ToString() const;
};

// log M (1 - (1 - r/N) P(0)) - E[log(M'+1)].
double AnalyticMil(const PirSetting& setting, const MPrimeDistribution& dist);
// log M + log(E[1/(M'+1)] - (1 - 1/M)(1 - r/N) P(0)).
double AnalyticMaxl(const PirSetting& setting, const MPrimeDistribution& dist);
double AnalyticLeakage(const PirSetting& setting, const MPrimeDistribution& dist,
                       Metric metric);

// What a subset of servers sees, reduced to one query class per server.
using ClassView = std::vector<QueryClass>;

// P(view | theta) for the given servers (ascending). Throws
// std::invalid_argument for an exhaustive request on a space with more than
// 10^7 realizations or Monte-Carlo with zero samples.
std::map<ClassView, double> EmpiricalClassPmf(const PirSetting& setting,
                                              const MPrimeDistribution& dist,
                                              int theta,
                                              const std::vector<int>& servers,
                                              const LeakageOptions& options);
// Same, for the first t servers.
std::map<ClassView, double> EmpiricalClassPmf(const PirSetting& setting,
                                              const MPrimeDistribution& dist,
                                              int theta, int t,
                                              const LeakageOptions& options);

// Class-level empirical leakage to t-subsets: the average of I(theta; view)
// over all (N choose t) subsets for MIL, the maximum for MaxL.
LeakageReport EmpiricalLeakage(const PirSetting& setting,
                               const MPrimeDistribution& dist, Metric metric,
                               int t, const LeakageOptions& options);
double EmpiricalMil(const PirSetting& setting, const MPrimeDistribution& dist,
                    int t, const LeakageOptions& options);
double EmpiricalMaxl(const PirSetting& setting, const MPrimeDistribution& dist,
                     int t, const LeakageOptions& options);

// Leakage over complete query realizations, enumerating the base-scheme
// permutations as well (replicated storage only, exhaustive only).
double FullQueryLeakage(const PirSetting& setting,
                        const MPrimeDistribution& dist, Metric metric,
                        const LeakageOptions& options);

struct PrivacyCheck {
  // Max over collusion_size-subsets and theta pairs of the total variation
  // distance between P(view | theta) and P(view | theta').
  double max_tv = 0;
  double threshold = 0;  // 0 for exhaustive
  std::size_t cells = 0;
  std::uint64_t samples = 0;  // per theta; realizations when exhaustive
  // min over subsets of H(theta | view) with theta uniform.
  double conditional_entropy = 0;
  // Every posterior P(theta | view) is uniform, in exact arithmetic.
  bool uniform_posteriors = false;

  bool Passed() const { return max_tv <= threshold; }
};

// The base scheme of `setting` (dist empty) or the wrapper with `dist`.
// Exhaustive mode enumerates every permutation of the replicated scheme and
// compares complete queries. Monte-Carlo mode compares a projection of each
// query: its tag and class, plus, per file, the first (segment, coefficient)
// term of that file.
PrivacyCheck BasePrivacyCheck(const PirSetting& setting,
                              const std::optional<MPrimeDistribution>& dist,
                              const LeakageOptions& options);

}  // namespace wpir

#endif  // WPIR_LEAKAGE_H_
