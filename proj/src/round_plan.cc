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

#include "wpir/round_plan.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "wpir/setting.h"

namespace wpir {

std::vector<std::vector<int>> Subsets(int m, int s) {
  std::vector<std::vector<int>> out;
  if (s < 0 || s > m) return out;
  std::vector<int> cur(s);
  for (int i = 0; i < s; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = s - 1;
    while (i >= 0 && cur[i] == m - s + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::shared_ptr<const RoundPlan> CachedPlan(const PlanShape& shape, int m,
                                            int theta_pos) {
  static std::mutex mu;
  static std::map<std::tuple<PlanShape, int, int>,
                  std::shared_ptr<const RoundPlan>>
      cache;
  const auto key = std::make_tuple(shape, m, theta_pos);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto plan = std::make_shared<const RoundPlan>(shape, m, theta_pos);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(plan)).first->second;
}

RoundPlan::RoundPlan(const PlanShape& shape, int m, int theta_pos)
    : shape_(shape), m_(m), theta_pos_(theta_pos) {
  const int n = shape.servers;
  if (n < 2 || shape.r < 1 || shape.r >= n || shape.multiplier < 1 ||
      shape.multiplier > n || shape.group_width < 1) {
    throw std::invalid_argument("invalid round plan shape");
  }
  if (m < 1 || theta_pos < 0 || theta_pos >= m) {
    throw std::invalid_argument("invalid file count or desired position");
  }
  units_ = static_cast<std::uint32_t>(IntPow(n, m));
  consumed_.assign(m, 0);

  // Undesired groups, in (round, subset, group) order.
  std::map<std::vector<int>, std::vector<int>> groups_of;
  for (int s = 1; s < m; ++s) {
    const std::uint64_t count = static_cast<std::uint64_t>(n) * Alpha(s) /
                                static_cast<std::uint64_t>(shape.r);
    for (const auto& subset : Subsets(m, s)) {
      if (std::binary_search(subset.begin(), subset.end(), theta_pos)) continue;
      auto& ids = groups_of[subset];
      for (std::uint64_t g = 0; g < count; ++g) {
        PlanGroup group;
        group.round = s;
        group.positions = subset;
        group.window_start = static_cast<int>(g % n);
        for (int p : subset) {
          std::vector<std::uint32_t> idx(shape.group_width);
          for (auto& i : idx) i = consumed_[p]++;
          group.logical.push_back(std::move(idx));
        }
        ids.push_back(static_cast<int>(groups_.size()));
        groups_.push_back(std::move(group));
      }
    }
  }
  for (int p = 0; p < m; ++p) {
    if (consumed_[p] > units_) {
      throw std::logic_error("round plan exhausted undesired indices");
    }
  }

  slots_.assign(n, {});
  for (int server = 0; server < n; ++server) {
    std::vector<std::uint32_t> units;
    for (std::uint32_t u = 0; u < units_; ++u) {
      const int offset = (server - static_cast<int>(u % n) + n) % n;
      if (offset < shape.multiplier) units.push_back(u);
    }
    std::size_t next_unit = 0;
    auto& out = slots_[server];
    for (int s = 1; s <= m; ++s) {
      for (const auto& subset : Subsets(m, s)) {
        const bool desired =
            std::binary_search(subset.begin(), subset.end(), theta_pos);
        std::uint64_t emitted = 0;
        auto push = [&](int group) {
          PlanSlot slot;
          slot.round = s;
          slot.positions = subset;
          slot.desired = desired;
          slot.group = group;
          if (desired) {
            if (next_unit >= units.size()) {
              throw std::logic_error("round plan ran out of desired units");
            }
            slot.desired_unit = units[next_unit++];
          }
          out.push_back(std::move(slot));
          ++emitted;
        };
        if (!desired) {
          for (int id : groups_of[subset]) {
            if (InGroupWindow(groups_[id], server)) push(id);
          }
        } else if (s == 1) {
          for (std::uint64_t i = 0; i < Alpha(1); ++i) push(-1);
        } else {
          std::vector<int> rest;
          for (int p : subset) {
            if (p != theta_pos) rest.push_back(p);
          }
          for (int id : groups_of[rest]) {
            if (!InGroupWindow(groups_[id], server)) push(id);
          }
        }
        if (emitted != Alpha(s)) {
          throw std::logic_error(fmt::format(
              "round {} emitted {} slots, expected {}", s, emitted, Alpha(s)));
        }
      }
    }
    if (next_unit != units.size()) {
      throw std::logic_error("round plan left desired units unused");
    }
  }
}

bool RoundPlan::InGroupWindow(const PlanGroup& g, int server) const {
  const int n = shape_.servers;
  return (server - g.window_start + n) % n < shape_.r;
}

std::vector<int> RoundPlan::UnitServers(std::uint32_t unit) const {
  const int n = shape_.servers;
  std::vector<int> out;
  for (int i = 0; i < shape_.multiplier; ++i) {
    out.push_back((static_cast<int>(unit % n) + i) % n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t RoundPlan::Alpha(int round) const {
  return static_cast<std::uint64_t>(shape_.multiplier) *
         IntPow(shape_.r, m_ - round) *
         IntPow(shape_.servers - shape_.r, round - 1);
}

std::uint64_t RoundPlan::TotalSlots() const {
  std::uint64_t total = 0;
  for (const auto& s : slots_) total += s.size();
  return total;
}

std::vector<Symbol> LagrangeWeights(const Field& field,
                                    std::span<const Symbol> points,
                                    Symbol x_target) {
  std::vector<Symbol> w(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Symbol num = 1;
    Symbol den = 1;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      if (points[i] == points[j]) {
        throw std::invalid_argument("repeated interpolation point");
      }
      num = field.Mul(num, field.Sub(x_target, points[j]));
      den = field.Mul(den, field.Sub(points[i], points[j]));
    }
    w[i] = field.Div(num, den);
  }
  return w;
}

std::vector<Symbol> InterpolateAt(const Field& field,
                                  std::span<const Symbol> points,
                                  std::span<const std::vector<Symbol>> values,
                                  Symbol x_target) {
  if (points.size() != values.size() || points.empty()) {
    throw std::invalid_argument("interpolation needs one value per point");
  }
  const std::vector<Symbol> w = LagrangeWeights(field, points, x_target);
  std::vector<Symbol> out(values[0].size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (values[i].size() != out.size()) {
      throw std::invalid_argument("interpolation values differ in length");
    }
    field.AddScaled(out, w[i], values[i]);
  }
  return out;
}

RoundDecoder::RoundDecoder(const RoundPlan& plan, const Field& field,
                           std::span<const AnswerString> answers) {
  const int n = plan.shape().servers;
  if (answers.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("need one answer per server");
  }
  const std::size_t first = plan.slots(0).size();
  if (first == 0 || answers[0].symbols.size() % first != 0 ||
      answers[0].symbols.empty()) {
    throw std::invalid_argument("answer length is not a multiple of the plan");
  }
  const std::uint64_t block = answers[0].symbols.size() / first;
  block_ = block;
  for (int server = 0; server < n; ++server) {
    if (answers[server].symbols.size() != plan.slots(server).size() * block) {
      throw std::invalid_argument(fmt::format(
          "server {} answered {} symbols, expected {}", server,
          answers[server].symbols.size(), plan.slots(server).size() * block));
    }
  }
  auto value_at = [&](int server, std::size_t slot) {
    const auto* begin = answers[server].symbols.data() + slot * block;
    return std::vector<Symbol>(begin, begin + block);
  };

  // Window answers of every group, ordered by server.
  std::vector<std::vector<std::pair<int, std::vector<Symbol>>>> window(
      plan.groups().size());
  for (int server = 0; server < n; ++server) {
    const auto& slots = plan.slots(server);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].desired) {
        window[slots[i].group].emplace_back(server, value_at(server, i));
      }
    }
  }

  // Lagrange weights depend only on (window start, target server).
  std::map<std::pair<int, int>, std::vector<Symbol>> weight_cache;
  auto weights = [&](const PlanGroup& g, int target) -> const std::vector<Symbol>& {
    auto key = std::make_pair(g.window_start, target);
    auto it = weight_cache.find(key);
    if (it != weight_cache.end()) return it->second;
    std::vector<Symbol> points;
    for (const auto& [server, unused] : window[&g - plan.groups().data()]) {
      points.push_back(static_cast<Symbol>(server + 1));
    }
    return weight_cache
        .emplace(key, LagrangeWeights(field, points,
                                      static_cast<Symbol>(target + 1)))
        .first->second;
  };

  for (int server = 0; server < n; ++server) {
    const auto& slots = plan.slots(server);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].desired) continue;
      std::vector<Symbol> value = value_at(server, i);
      if (slots[i].group >= 0) {
        const PlanGroup& g = plan.groups()[slots[i].group];
        const auto& w = weights(g, server);
        const auto& win = window[slots[i].group];
        for (std::size_t j = 0; j < win.size(); ++j) {
          field.AddScaled(value, field.Neg(w[j]), win[j].second);
        }
      }
      desired_.push_back({server, slots[i].desired_unit, std::move(value)});
    }
  }
}

}  // namespace wpir
