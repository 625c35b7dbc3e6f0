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

#include "wpir/leakage.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "wpir/mdspir.h"
#include "wpir/round_plan.h"
#include "wpir/sunjafar.h"
#include "wpir/tpir.h"

namespace wpir {

std::string MetricName(Metric m) { return m == Metric::kMil ? "MIL" : "MaxL"; }

Metric ParseMetric(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "mil" || t == "mi") return Metric::kMil;
  if (t == "maxl" || t == "ml") return Metric::kMaxl;
  throw std::invalid_argument(fmt::format("unknown metric '{}'", text));
}

std::string MethodName(Method m) {
  return m == Method::kExhaustive ? "exhaustive" : "monte_carlo";
}

Method ParseMethod(const std::string& text) {
  if (text == "exhaustive") return Method::kExhaustive;
  if (text == "monte_carlo" || text == "montecarlo" || text == "mc") {
    return Method::kMonteCarlo;
  }
  throw std::invalid_argument(fmt::format("unknown method '{}'", text));
}

bool LeakageReport::Agrees() const {
  return std::abs(empirical_value - analytic_value) <= tv_threshold;
}

std::string LeakageReport::ToString() const {
  return fmt::format(
      "{} analytic={:.12f} empirical={:.12f} method={} samples={} cells={} "
      "threshold={:.3g}",
      MetricName(metric), analytic_value, empirical_value, MethodName(method),
      sample_count, cells, tv_threshold);
}

double AnalyticMil(const PirSetting& setting, const MPrimeDistribution& dist) {
  setting.Validate();
  if (dist.files() != setting.files) {
    throw std::invalid_argument("M' distribution length differs from M");
  }
  const double ratio = static_cast<double>(setting.r) / setting.servers;
  double e_log = 0;
  for (int m = 0; m < dist.files(); ++m) {
    e_log += dist.probability(m) * std::log2(m + 1.0);
  }
  const double value =
      std::log2(setting.files) * (1 - (1 - ratio) * dist.probability(0)) - e_log;
  return std::max(0.0, value);
}

double AnalyticMaxl(const PirSetting& setting, const MPrimeDistribution& dist) {
  setting.Validate();
  if (dist.files() != setting.files) {
    throw std::invalid_argument("M' distribution length differs from M");
  }
  // Exact inner sum; only the final logarithm is floating point.
  const Rational ratio(setting.r, setting.servers);
  Rational inner = 0;
  for (int m = 0; m < dist.files(); ++m) inner += dist.p(m) / (m + 1);
  inner -= (1 - Rational(1, setting.files)) * (1 - ratio) * dist.p(0);
  return std::max(0.0, std::log2(setting.files) + std::log2(ToDouble(inner)));
}

double AnalyticLeakage(const PirSetting& setting, const MPrimeDistribution& dist,
                       Metric metric) {
  return metric == Metric::kMil ? AnalyticMil(setting, dist)
                                : AnalyticMaxl(setting, dist);
}

namespace {

constexpr std::uint64_t kMaxRealizations = 10000000;
constexpr int kShards = 16;

FieldPtr FieldFor(const PirSetting& setting, const LeakageOptions& options) {
  if (options.field) return options.field;
  if (setting.variant == Variant::kTCollusion) {
    return Field::SmallestBinary(static_cast<std::uint32_t>(setting.servers) + 1);
  }
  return Field::Default();
}

// ---- per-server view keys ----

std::string ClassKey(const QueryToken& q) { return QueryClassOf(q).ToString(); }

std::string FeatureKey(const QueryToken& q) {
  std::string key = ClassKey(q);
  if (q.tag() != QueryTag::kStructured) return key;
  for (int file : q.file_class()) {
    for (const Combination& c : q.combinations()) {
      auto it = std::find_if(c.begin(), c.end(),
                             [&](const Term& t) { return t.file == file; });
      if (it != c.end()) {
        key += fmt::format("|{}:{}:{}", file, it->segment, it->coeff);
        break;
      }
    }
  }
  return key;
}

std::string FullKey(const QueryToken& q) {
  std::string key = ClassKey(q);
  for (const Combination& c : q.combinations()) {
    key += "|";
    for (const Term& t : c) key += fmt::format("{}:{}:{},", t.file, t.segment, t.coeff);
  }
  return key;
}

using KeyFn = std::function<std::string(const QueryToken&)>;

std::vector<std::vector<int>> ServerSubsets(int servers, int t) {
  if (t < 1 || t > servers) {
    throw std::invalid_argument(fmt::format("subset size {} outside [1:{}]", t, servers));
  }
  return Subsets(servers, t);
}

std::string ViewKey(const std::vector<std::string>& per_server,
                    const std::vector<int>& subset) {
  std::string key;
  for (int s : subset) {
    key += per_server[s];
    key += ';';
  }
  return key;
}

// P(view | theta) per subset: key -> masses indexed by theta - 1.
using Conditional = std::map<std::string, std::vector<Rational>>;
using Counts = std::map<std::string, std::vector<std::uint64_t>>;

struct Tables {
  std::vector<std::vector<int>> subsets;
  std::vector<Conditional> conditional;
  std::map<std::string, ClassView> labels;  // class-level keys only
  std::uint64_t per_theta = 0;
};

// ---- session sources ----

using Sink = std::function<void(int theta, const Rational& weight,
                                const std::vector<QueryToken>& tokens)>;

std::uint64_t Factorial(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (f > kMaxRealizations) return kMaxRealizations + 1;
    f *= i;
  }
  return f;
}

// Calls `visit` for every tuple of `count` permutations of [0, units).
void ForEachPermutationTuple(
    int count, std::uint32_t units,
    const std::function<void(const std::vector<std::vector<std::uint32_t>>&)>& visit) {
  std::vector<std::uint32_t> identity(units);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<std::uint32_t>> tuple(count, identity);
  while (true) {
    visit(tuple);
    int i = count - 1;
    while (i >= 0 && !std::next_permutation(tuple[i].begin(), tuple[i].end())) {
      --i;  // tuple[i] wrapped back to the identity
    }
    if (i < 0) return;
  }
}

// Every (theta, M', S, J) with exact weight P(M') P(S or J | M'); the base
// randomness is either fixed or, when `all_base`, fully enumerated.
void EnumerateSessions(const PirSetting& setting, const MPrimeDistribution& dist,
                       const Field& field, bool all_base, const Sink& sink) {
  const int n = setting.servers;
  const int files = setting.files;
  // Size check first.
  std::uint64_t total = 0;
  for (int mp = 0; mp < files; ++mp) {
    if (dist.p(mp) == 0) continue;
    std::uint64_t count = 0;
    if (mp == 0) {
      count = setting.variant == Variant::kMds ? Binomial(n, setting.r) : n;
    } else {
      count = Binomial(files - 1, mp);
      if (all_base) {
        if (setting.variant == Variant::kTCollusion) {
          throw std::invalid_argument(
              "mixing matrices cannot be enumerated exhaustively");
        }
        const std::uint64_t perms = Factorial(IntPow(n, mp + 1));
        std::uint64_t tuples = 1;
        for (int i = 0; i <= mp && tuples <= kMaxRealizations; ++i) tuples *= perms;
        count *= tuples;
      }
    }
    total += count * files;
    if (total > kMaxRealizations) {
      throw std::invalid_argument("space too large for exhaustive enumeration");
    }
  }

  for (int theta = 1; theta <= files; ++theta) {
    for (int mp = 0; mp < files; ++mp) {
      if (dist.p(mp) == 0) continue;
      if (mp == 0) {
        const int k = setting.variant == Variant::kMds ? setting.r : 1;
        const auto targets = Subsets(n, k);
        const Rational w = dist.p(0) / static_cast<long long>(targets.size());
        for (const auto& s : targets) {
          WpirRandomness rand;
          rand.clean_servers = s;
          sink(theta, w, WpirQuery(setting, theta, rand, field));
        }
        continue;
      }
      std::vector<int> others;
      for (int f = 1; f <= files; ++f) {
        if (f != theta) others.push_back(f);
      }
      const auto decoy_sets = Subsets(files - 1, mp);
      const Rational w = dist.p(mp) / static_cast<long long>(decoy_sets.size());
      const int m = mp + 1;
      const auto units = static_cast<std::uint32_t>(IntPow(n, m));
      for (const auto& d : decoy_sets) {
        WpirRandomness rand;
        rand.m_prime = mp;
        for (int i : d) rand.decoys.push_back(others[i]);
        if (setting.variant == Variant::kTCollusion) {
          rand.units = static_cast<int>(units);
          std::vector<Symbol> eye(static_cast<std::size_t>(units) * units, 0);
          for (std::uint32_t i = 0; i < units; ++i) eye[i * units + i] = 1;
          rand.matrices.assign(m, eye);
          sink(theta, w, WpirQuery(setting, theta, rand, field));
        } else if (!all_base) {
          std::vector<std::uint32_t> identity(units);
          std::iota(identity.begin(), identity.end(), 0);
          rand.permutations.assign(m, identity);
          sink(theta, w, WpirQuery(setting, theta, rand, field));
        } else {
          Rational tuples = 1;
          for (int i = 0; i < m; ++i) {
            tuples *= static_cast<long long>(Factorial(units));
          }
          const Rational wb = w / tuples;
          ForEachPermutationTuple(m, units, [&](const auto& perms) {
            rand.permutations = perms;
            sink(theta, wb, WpirQuery(setting, theta, rand, field));
          });
        }
      }
    }
  }
}

// Tokens of one sampled session, for the wrapper or the base scheme alone.
std::vector<QueryToken> SampleSession(const PirSetting& setting,
                                      const std::optional<MPrimeDistribution>& dist,
                                      int theta, const Field& field, Rng& rng) {
  if (dist) {
    const WpirRandomness rand =
        SampleWpirRandomness(setting, theta, *dist, field, rng);
    return WpirQuery(setting, theta, rand, field);
  }
  const int n = setting.servers;
  const int files = setting.files;
  switch (setting.variant) {
    case Variant::kReplicated:
      return SjQuery(n, files, theta, SampleSjRandomness(n, files, rng));
    case Variant::kMds:
      return BuQuery(n, setting.r, files, theta, SampleBuRandomness(n, files, rng));
    case Variant::kTCollusion:
      return TsjQuery(n, setting.r, files, theta,
                      SampleTsjRandomness(n, files, field, rng), field);
  }
  throw std::logic_error("unknown variant");
}

void AddLabels(const std::vector<QueryToken>& tokens,
               const std::vector<std::string>& keys,
               const std::vector<std::vector<int>>& subsets,
               std::map<std::string, ClassView>& labels) {
  for (const auto& subset : subsets) {
    const std::string key = ViewKey(keys, subset);
    if (labels.count(key)) continue;
    ClassView view;
    for (int s : subset) view.push_back(QueryClassOf(tokens[s]));
    labels.emplace(key, std::move(view));
  }
}

Tables ExhaustiveTables(const PirSetting& setting, const MPrimeDistribution& dist,
                        const Field& field, bool all_base, const KeyFn& key_fn,
                        const std::vector<std::vector<int>>& subsets,
                        bool with_labels) {
  Tables tables;
  tables.subsets = subsets;
  tables.conditional.assign(subsets.size(), {});
  const int files = setting.files;
  EnumerateSessions(setting, dist, field, all_base,
                    [&](int theta, const Rational& w,
                        const std::vector<QueryToken>& tokens) {
                      if (theta == 1) ++tables.per_theta;
                      std::vector<std::string> keys;
                      for (const auto& t : tokens) keys.push_back(key_fn(t));
                      for (std::size_t i = 0; i < subsets.size(); ++i) {
                        auto& cell = tables.conditional[i][ViewKey(keys, subsets[i])];
                        if (cell.empty()) cell.assign(files, Rational(0));
                        cell[theta - 1] += w;
                      }
                      if (with_labels) AddLabels(tokens, keys, subsets, tables.labels);
                    });
  return tables;
}

Tables MonteCarloTables(const PirSetting& setting,
                        const std::optional<MPrimeDistribution>& dist,
                        const Field& field, const LeakageOptions& options,
                        const KeyFn& key_fn,
                        const std::vector<std::vector<int>>& subsets,
                        bool with_labels) {
  if (options.samples == 0) {
    throw std::invalid_argument("Monte-Carlo estimation needs samples > 0");
  }
  const int files = setting.files;
  const std::uint64_t per_theta = (options.samples + files - 1) / files;

  struct Shard {
    std::vector<Counts> counts;
    std::map<std::string, ClassView> labels;
  };
  std::vector<Shard> shards(kShards);
  const Rng root(options.seed);
  auto run_shard = [&](int index) {
    Shard& shard = shards[index];
    shard.counts.assign(subsets.size(), {});
    Rng shard_rng = root.Substream(static_cast<std::uint64_t>(index));
    for (int theta = 1; theta <= files; ++theta) {
      const std::uint64_t count =
          per_theta / kShards + (static_cast<std::uint64_t>(index) < per_theta % kShards ? 1 : 0);
      Rng theta_rng = shard_rng.Substream(static_cast<std::uint64_t>(theta));
      for (std::uint64_t i = 0; i < count; ++i) {
        Rng session = theta_rng.Substream(i);
        const auto tokens = SampleSession(setting, dist, theta, field, session);
        std::vector<std::string> keys;
        for (const auto& t : tokens) keys.push_back(key_fn(t));
        for (std::size_t s = 0; s < subsets.size(); ++s) {
          auto& cell = shard.counts[s][ViewKey(keys, subsets[s])];
          if (cell.empty()) cell.assign(files, 0);
          ++cell[theta - 1];
        }
        if (with_labels) AddLabels(tokens, keys, subsets, shard.labels);
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, kShards);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next++; i < kShards; i = next++) {
        try {
          run_shard(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  Tables tables;
  tables.subsets = subsets;
  tables.per_theta = per_theta;
  tables.conditional.assign(subsets.size(), {});
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    Counts merged;
    for (const Shard& shard : shards) {
      for (const auto& [key, c] : shard.counts[s]) {
        auto& cell = merged[key];
        if (cell.empty()) cell.assign(files, 0);
        for (int i = 0; i < files; ++i) cell[i] += c[i];
      }
    }
    for (const auto& [key, c] : merged) {
      auto& cell = tables.conditional[s][key];
      for (int i = 0; i < files; ++i) {
        cell.push_back(Rational(static_cast<long long>(c[i]),
                                static_cast<long long>(per_theta)));
      }
    }
  }
  for (const Shard& shard : shards) {
    tables.labels.insert(shard.labels.begin(), shard.labels.end());
  }
  return tables;
}

// ---- metrics on P(view | theta), theta uniform ----

double MutualInformation(const Conditional& cond, int files) {
  double info = 0;
  for (const auto& [key, masses] : cond) {
    Rational marginal = 0;
    for (const Rational& p : masses) marginal += p;
    marginal /= files;
    const double pv = ToDouble(marginal);
    for (const Rational& p : masses) {
      if (p == 0) continue;
      const double pt = ToDouble(p);
      info += pt / files * std::log2(pt / pv);
    }
  }
  return std::max(0.0, info);
}

double MaximalLeakage(const Conditional& cond) {
  Rational total = 0;
  for (const auto& [key, masses] : cond) {
    total += *std::max_element(masses.begin(), masses.end());
  }
  return std::max(0.0, std::log2(ToDouble(total)));
}

Rational MaxTotalVariation(const Conditional& cond, int files) {
  Rational best = 0;
  for (int a = 0; a < files; ++a) {
    for (int b = a + 1; b < files; ++b) {
      Rational tv = 0;
      for (const auto& [key, masses] : cond) tv += abs(masses[a] - masses[b]);
      tv /= 2;
      if (tv > best) best = tv;
    }
  }
  return best;
}

// H(theta | view), grouping views by their exact posterior.
double ConditionalEntropy(const Conditional& cond, int files,
                          bool* uniform_posteriors) {
  std::map<std::vector<Rational>, Rational> groups;
  bool uniform = true;
  for (const auto& [key, masses] : cond) {
    Rational total = 0;
    for (const Rational& p : masses) total += p;
    if (total == 0) continue;
    std::vector<Rational> posterior;
    for (const Rational& p : masses) {
      posterior.push_back(p / total);
      if (p != masses[0]) uniform = false;
    }
    groups[posterior] += total / files;
  }
  double h = 0;
  for (const auto& [posterior, weight] : groups) {
    double hp = 0;
    for (const Rational& p : posterior) {
      if (p == 0) continue;
      const double x = ToDouble(p);
      hp -= x * std::log2(x);
    }
    h += ToDouble(weight) * hp;
  }
  if (uniform_posteriors) *uniform_posteriors = uniform;
  return h;
}

double CombineLeakage(const Tables& tables, Metric metric, int files) {
  double result = 0;
  for (const Conditional& cond : tables.conditional) {
    if (metric == Metric::kMil) {
      result += MutualInformation(cond, files);
    } else {
      result = std::max(result, MaximalLeakage(cond));
    }
  }
  if (metric == Metric::kMil) result /= static_cast<double>(tables.conditional.size());
  return result;
}

std::size_t MaxCells(const Tables& tables) {
  std::size_t cells = 0;
  for (const Conditional& cond : tables.conditional) cells = std::max(cells, cond.size());
  return cells;
}

void CheckInputs(const PirSetting& setting, const MPrimeDistribution& dist) {
  setting.Validate();
  if (dist.files() != setting.files) {
    throw std::invalid_argument("M' distribution length differs from M");
  }
}

Tables ClassTables(const PirSetting& setting, const MPrimeDistribution& dist,
                   const std::vector<std::vector<int>>& subsets,
                   const LeakageOptions& options, bool with_labels) {
  CheckInputs(setting, dist);
  const FieldPtr field = FieldFor(setting, options);
  if (options.method == Method::kExhaustive) {
    return ExhaustiveTables(setting, dist, *field, false, ClassKey, subsets,
                            with_labels);
  }
  return MonteCarloTables(setting, dist, *field, options, ClassKey, subsets,
                          with_labels);
}

}  // namespace

std::map<ClassView, double> EmpiricalClassPmf(const PirSetting& setting,
                                              const MPrimeDistribution& dist,
                                              int theta,
                                              const std::vector<int>& servers,
                                              const LeakageOptions& options) {
  if (theta < 1 || theta > setting.files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, setting.files));
  }
  std::vector<int> subset = servers;
  std::sort(subset.begin(), subset.end());
  if (subset.empty() || subset.front() < 0 || subset.back() >= setting.servers ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    throw std::invalid_argument("invalid server subset");
  }
  const Tables tables = ClassTables(setting, dist, {subset}, options, true);
  std::map<ClassView, double> out;
  for (const auto& [key, masses] : tables.conditional[0]) {
    if (masses[theta - 1] == 0) continue;
    out[tables.labels.at(key)] += ToDouble(masses[theta - 1]);
  }
  return out;
}

std::map<ClassView, double> EmpiricalClassPmf(const PirSetting& setting,
                                              const MPrimeDistribution& dist,
                                              int theta, int t,
                                              const LeakageOptions& options) {
  if (t < 1 || t > setting.servers) {
    throw std::invalid_argument("subset size outside [1:N]");
  }
  std::vector<int> servers(t);
  std::iota(servers.begin(), servers.end(), 0);
  return EmpiricalClassPmf(setting, dist, theta, servers, options);
}

LeakageReport EmpiricalLeakage(const PirSetting& setting,
                               const MPrimeDistribution& dist, Metric metric,
                               int t, const LeakageOptions& options) {
  const Tables tables =
      ClassTables(setting, dist, ServerSubsets(setting.servers, t), options, false);
  LeakageReport report;
  report.metric = metric;
  report.method = options.method;
  report.analytic_value = AnalyticLeakage(setting, dist, metric);
  report.empirical_value = CombineLeakage(tables, metric, setting.files);
  report.sample_count = tables.per_theta;
  report.cells = MaxCells(tables);
  report.tv_threshold =
      options.method == Method::kExhaustive
          ? 1e-10
          : 4 * std::sqrt(static_cast<double>(report.cells) / tables.per_theta);
  return report;
}

double EmpiricalMil(const PirSetting& setting, const MPrimeDistribution& dist,
                    int t, const LeakageOptions& options) {
  return EmpiricalLeakage(setting, dist, Metric::kMil, t, options).empirical_value;
}

double EmpiricalMaxl(const PirSetting& setting, const MPrimeDistribution& dist,
                     int t, const LeakageOptions& options) {
  return EmpiricalLeakage(setting, dist, Metric::kMaxl, t, options).empirical_value;
}

double FullQueryLeakage(const PirSetting& setting,
                        const MPrimeDistribution& dist, Metric metric,
                        const LeakageOptions& options) {
  CheckInputs(setting, dist);
  if (setting.variant != Variant::kReplicated ||
      options.method != Method::kExhaustive) {
    throw std::invalid_argument(
        "full-query leakage is exhaustive and replicated-only");
  }
  const FieldPtr field = FieldFor(setting, options);
  const Tables tables = ExhaustiveTables(
      setting, dist, *field, true, FullKey,
      ServerSubsets(setting.servers, setting.collusion_size()), false);
  return CombineLeakage(tables, metric, setting.files);
}

PrivacyCheck BasePrivacyCheck(const PirSetting& setting,
                              const std::optional<MPrimeDistribution>& dist,
                              const LeakageOptions& options) {
  setting.Validate();
  const FieldPtr field = FieldFor(setting, options);
  const auto subsets = ServerSubsets(setting.servers, setting.collusion_size());
  Tables tables;
  if (options.method == Method::kExhaustive) {
    // The base scheme is the wrapper with M' = M-1 and J = all other files.
    const MPrimeDistribution effective =
        dist ? *dist : MPrimeDistribution::PointMass(setting.files, setting.files - 1);
    tables = ExhaustiveTables(setting, effective, *field, true, FullKey, subsets,
                              false);
  } else {
    tables = MonteCarloTables(setting, dist, *field, options, FeatureKey,
                              subsets, false);
  }
  PrivacyCheck check;
  check.samples = tables.per_theta;
  check.cells = MaxCells(tables);
  check.threshold =
      options.method == Method::kExhaustive
          ? 0
          : 4 * std::sqrt(static_cast<double>(check.cells) / tables.per_theta);
  check.conditional_entropy = std::log2(setting.files);
  check.uniform_posteriors = true;
  for (const Conditional& cond : tables.conditional) {
    check.max_tv = std::max(check.max_tv,
                            ToDouble(MaxTotalVariation(cond, setting.files)));
    bool uniform = false;
    check.conditional_entropy = std::min(
        check.conditional_entropy, ConditionalEntropy(cond, setting.files, &uniform));
    check.uniform_posteriors = check.uniform_posteriors && uniform;
  }
  return check;
}

}  // namespace wpir
