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

// Closed-form rate/leakage trade-offs of the time-sharing wrapper with a
// two-point M' distribution on {0, M-1}, and a brute-force search over all
// M' distributions on a simplex grid.
#ifndef WPIR_TRADEOFF_H_
#define WPIR_TRADEOFF_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "wpir/leakage.h"
#include "wpir/rational.h"
#include "wpir/setting.h"
#include "wpir/wpir.h"

namespace wpir {

struct TradeoffPoint {
  double rho_budget = 0;
  double rho_achieved = 0;    // min(budget, saturation)
  double rho_normalized = 0;  // achieved / log M (0 when M = 1)
  Rational p0 = 0;            // P(M' = 0) of the optimal two-point pmf
  Rational rate = 1;
};

// Leakage beyond which rate 1 is reachable: r log M / N for MIL,
// log(1 + r (M-1) / N) for MaxL.
double SaturationLeakage(const PirSetting& setting, Metric metric);

// P(M' = 0) spending the budget: min(1, rho N / (r log M)) for MIL,
// min(1, N (2^rho - 1) / (r (M-1))) for MaxL. Throws for rho < 0.
double OptimalP0(const PirSetting& setting, Metric metric, double rho);

// (1 + (1 - p0) * sum_{i=1}^{M-1} (r/N)^i)^-1, exactly.
Rational TwoPointRate(const PirSetting& setting, const Rational& p0);

TradeoffPoint TheoremTradeoff(const PirSetting& setting, Metric metric,
                              double rho);
// Exact variant: when the metric is MIL and M is a power of two, P(0) is
// computed in rational arithmetic; otherwise as TheoremTradeoff.
TradeoffPoint TheoremTradeoff(const PirSetting& setting, Metric metric,
                              const Rational& rho);

MPrimeDistribution OptimalDistForBudget(const PirSetting& setting,
                                        Metric metric, double rho);

// Uniform grid of `grid_points` budgets from 0 to 1.1 x saturation.
// Throws for grid_points < 2.
std::vector<TradeoffPoint> SweepCurve(const PirSetting& setting, Metric metric,
                                      int grid_points);

// Header plus one row per point, 17 significant digits, LF endings.
void WriteCurveCsv(const std::vector<TradeoffPoint>& points, std::ostream& out);
std::string CurveCsv(const std::vector<TradeoffPoint>& points);

struct DistSearchResult {
  MPrimeDistribution best = MPrimeDistribution::PointMass(1, 0);
  Rational rate = 0;
  double leakage = 0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
  // Grid points attaining the best rate, and those among them with mass
  // outside {0, M-1}.
  std::size_t maximizers = 0;
  std::size_t off_support_maximizers = 0;

  // Every maximizer is supported on {0, M-1}.
  bool TwoPointSupport() const;
};

// Maximizes the wrapper rate over every pmf with masses in multiples of
// `resolution` subject to analytic leakage <= rho (+1e-12). Throws for
// rho < 0, M > 5 or a resolution outside (0, 1].
DistSearchResult NumericDistSearch(const PirSetting& setting, Metric metric,
                                   double rho, double resolution);

}  // namespace wpir

#endif  // WPIR_TRADEOFF_H_
