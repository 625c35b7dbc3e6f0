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

#include "wpir/tradeoff.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace wpir {

double SaturationLeakage(const PirSetting& setting, Metric metric) {
  setting.Validate();
  const double n = setting.servers;
  const double r = setting.r;
  if (metric == Metric::kMil) return r * std::log2(setting.files) / n;
  return std::log2(1 + r * (setting.files - 1) / n);
}

double OptimalP0(const PirSetting& setting, Metric metric, double rho) {
  setting.Validate();
  if (!(rho >= 0)) throw std::invalid_argument("leakage budget must be >= 0");
  if (setting.files == 1) return 1;
  const double n = setting.servers;
  const double r = setting.r;
  double p0 = 0;
  if (metric == Metric::kMil) {
    p0 = rho * n / (r * std::log2(setting.files));
  } else {
    p0 = n * (std::exp2(rho) - 1) / (r * (setting.files - 1));
  }
  return std::clamp(p0, 0.0, 1.0);
}

Rational TwoPointRate(const PirSetting& setting, const Rational& p0) {
  setting.Validate();
  const Rational ratio(setting.r, setting.servers);
  Rational tail = 0;
  for (int i = 1; i < setting.files; ++i) tail += Pow(ratio, i);
  const Rational clamped = 1 - p0 > 0 ? Rational(1 - p0) : Rational(0);
  return 1 / (1 + clamped * tail);
}

namespace {

TradeoffPoint PointFor(const PirSetting& setting, Metric metric, double rho,
                       const Rational& p0) {
  TradeoffPoint point;
  point.rho_budget = rho;
  point.rho_achieved = std::min(rho, SaturationLeakage(setting, metric));
  point.rho_normalized =
      setting.files > 1 ? point.rho_achieved / std::log2(setting.files) : 0;
  point.p0 = p0;
  point.rate = TwoPointRate(setting, p0);
  return point;
}

}  // namespace

TradeoffPoint TheoremTradeoff(const PirSetting& setting, Metric metric,
                              double rho) {
  return PointFor(setting, metric, rho,
                  SimplestRationalNear(OptimalP0(setting, metric, rho), 1e-12));
}

TradeoffPoint TheoremTradeoff(const PirSetting& setting, Metric metric,
                              const Rational& rho) {
  setting.Validate();
  if (rho < 0) throw std::invalid_argument("leakage budget must be >= 0");
  const auto m = static_cast<unsigned>(setting.files);
  if (metric != Metric::kMil || m < 2 || !std::has_single_bit(m)) {
    return TheoremTradeoff(setting, metric, ToDouble(rho));
  }
  const int log_m = std::countr_zero(m);
  Rational p0 = rho * setting.servers / (setting.r * log_m);
  if (p0 > 1) p0 = 1;
  return PointFor(setting, metric, ToDouble(rho), p0);
}

MPrimeDistribution OptimalDistForBudget(const PirSetting& setting,
                                        Metric metric, double rho) {
  return MPrimeDistribution::TwoPoint(
      setting.files, SimplestRationalNear(OptimalP0(setting, metric, rho), 1e-12));
}

std::vector<TradeoffPoint> SweepCurve(const PirSetting& setting, Metric metric,
                                      int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("need at least 2 grid points");
  const double top = 1.1 * SaturationLeakage(setting, metric);
  std::vector<TradeoffPoint> points;
  for (int i = 0; i < grid_points; ++i) {
    const double rho = i == 0 ? 0.0 : top * i / (grid_points - 1);
    points.push_back(TheoremTradeoff(setting, metric, rho));
  }
  return points;
}

void WriteCurveCsv(const std::vector<TradeoffPoint>& points, std::ostream& out) {
  out << "rho_budget,rho_achieved,rho_normalized,rate\n";
  for (const TradeoffPoint& p : points) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.rho_budget,
                       p.rho_achieved, p.rho_normalized, ToDouble(p.rate));
  }
}

std::string CurveCsv(const std::vector<TradeoffPoint>& points) {
  std::ostringstream out;
  WriteCurveCsv(points, out);
  return out.str();
}

bool DistSearchResult::TwoPointSupport() const {
  for (int m = 1; m + 1 < best.files(); ++m) {
    if (best.p(m) != 0) return false;
  }
  return off_support_maximizers == 0;
}

DistSearchResult NumericDistSearch(const PirSetting& setting, Metric metric,
                                   double rho, double resolution) {
  setting.Validate();
  if (!(rho >= 0)) throw std::invalid_argument("leakage budget must be >= 0");
  if (setting.files > 5) {
    throw std::invalid_argument("simplex search supports M <= 5");
  }
  if (!(resolution > 0 && resolution <= 1)) {
    throw std::invalid_argument("resolution must lie in (0, 1]");
  }
  const long long steps = std::llround(1 / resolution);
  const int m = setting.files;

  DistSearchResult result;
  bool have = false;
  std::vector<long long> counts(m, 0);
  auto off_support = [&](const std::vector<Rational>& pmf) {
    for (int i = 1; i + 1 < m; ++i) {
      if (pmf[i] != 0) return true;
    }
    return false;
  };
  // Every composition of `steps` into m parts.
  auto visit = [&]() {
    std::vector<Rational> pmf;
    for (long long c : counts) pmf.emplace_back(c, steps);
    const MPrimeDistribution dist(pmf);
    ++result.evaluated;
    const double leakage = AnalyticLeakage(setting, dist, metric);
    if (leakage > rho + 1e-12) return;
    ++result.feasible;
    const Rational rate = WpirRate(setting, dist);
    if (!have || rate > result.rate) {
      have = true;
      result.best = dist;
      result.rate = rate;
      result.leakage = leakage;
      result.maximizers = 0;
      result.off_support_maximizers = 0;
    }
    if (rate == result.rate) {
      ++result.maximizers;
      if (off_support(pmf)) ++result.off_support_maximizers;
    }
  };
  std::function<void(int, long long)> fill = [&](int index, long long left) {
    if (index == m - 1) {
      counts[index] = left;
      visit();
      return;
    }
    for (long long c = left; c >= 0; --c) {
      counts[index] = c;
      fill(index + 1, left - c);
    }
  };
  fill(0, steps);
  if (!have) throw std::logic_error("no feasible distribution on the grid");
  return result;
}

}  // namespace wpir
