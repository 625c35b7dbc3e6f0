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

// Round schedule shared by the replicated, MDS-coded and T-colluding
// capacity-achieving schemes.
//
// The m participating files are addressed by position 0..m-1. Queries are
// built in rounds s = 1..m; in round s every server is asked, for every
// s-subset of positions (lexicographic order), for
//
//     alpha(s) = mult * r^(m-s) * (N-r)^(s-1)
//
// sums over the files of the subset.
//
//  * Subsets without the desired position are served by "groups" of fresh
//    undesired material. Each group has a window of r consecutive servers
//    (mod N) that download it directly; the other N-r servers never see it
//    standalone and instead receive its contribution as side information,
//    added to a fresh desired unit in round s+1 under the subset U + {theta}.
//    Every server therefore touches every group exactly once.
//  * The r window answers of a group determine its value at every other
//    server: the group's contribution at server n is a polynomial of degree
//    < r evaluated at x_n = n+1 (an MDS code column for coded storage, an
//    MDS-coded query for T-collusion). With r = 1 it is the same everywhere.
//  * Desired units 0..N^m-1 are spread over servers with windows of `mult`
//    servers: unit u goes to servers u%N .. u%N+mult-1.
//
// Per server, round s draws alpha(s) slots per subset and the desired units
// handed to a server are exactly mult * N^(m-1); both identities are checked
// when the plan is built.
#ifndef WPIR_ROUND_PLAN_H_
#define WPIR_ROUND_PLAN_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"

namespace wpir {

struct PlanShape {
  int servers = 2;      // N
  int r = 1;            // group window size
  int multiplier = 1;   // K for MDS storage, else 1
  int group_width = 1;  // fresh indices per file per group: T for T-PIR

  auto operator<=>(const PlanShape&) const = default;
};

struct PlanGroup {
  int round = 1;
  std::vector<int> positions;  // sorted file positions
  int window_start = 0;
  // logical[i][w]: w-th fresh logical index of file positions[i].
  std::vector<std::vector<std::uint32_t>> logical;
};

struct PlanSlot {
  int round = 1;
  std::vector<int> positions;  // the subset, sorted
  bool desired = false;
  // Undesired slot: the group downloaded. Desired slot: the side-information
  // group (round - 1), or -1 in round 1.
  int group = -1;
  std::uint32_t desired_unit = 0;  // desired slots only
};

class RoundPlan {
 public:
  // Throws std::invalid_argument for m < 1, theta_pos outside [0, m) or an
  // invalid shape.
  RoundPlan(const PlanShape& shape, int m, int theta_pos);

  const PlanShape& shape() const { return shape_; }
  int files() const { return m_; }
  int theta_pos() const { return theta_pos_; }
  // N^m
  std::uint32_t units() const { return units_; }
  const std::vector<PlanGroup>& groups() const { return groups_; }
  const std::vector<PlanSlot>& slots(int server) const { return slots_[server]; }
  // Logical indices consumed per file position (undesired files only).
  const std::vector<std::uint32_t>& consumed() const { return consumed_; }

  bool InGroupWindow(const PlanGroup& g, int server) const;
  // Servers holding desired unit u, ascending.
  std::vector<int> UnitServers(std::uint32_t unit) const;
  // Slots per server per s-subset.
  std::uint64_t Alpha(int round) const;
  // Total slots over all servers.
  std::uint64_t TotalSlots() const;

 private:
  PlanShape shape_;
  int m_;
  int theta_pos_;
  std::uint32_t units_;
  std::vector<PlanGroup> groups_;
  std::vector<std::vector<PlanSlot>> slots_;
  std::vector<std::uint32_t> consumed_;
};

// Plans are immutable; this returns a process-wide shared instance.
std::shared_ptr<const RoundPlan> CachedPlan(const PlanShape& shape, int m,
                                            int theta_pos);

// All s-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<int>> Subsets(int m, int s);

// Value at x_target of the polynomial of degree < |points| through
// (points[i], values[i]), blockwise: values are equal-length vectors.
std::vector<Symbol> InterpolateAt(const Field& field,
                                  std::span<const Symbol> points,
                                  std::span<const std::vector<Symbol>> values,
                                  Symbol x_target);

// Lagrange weights w_i with p(x_target) = sum_i w_i * p(points[i]).
std::vector<Symbol> LagrangeWeights(const Field& field,
                                    std::span<const Symbol> points,
                                    Symbol x_target);

// Decoder-side bookkeeping shared by the schemes: recovers every group's
// contribution at every server from the window answers, and strips side
// information from desired slots.
class RoundDecoder {
 public:
  // answers[n] is server n's full answer. The block (symbols per
  // combination) is inferred from server 0 and must agree everywhere;
  // throws std::invalid_argument otherwise.
  RoundDecoder(const RoundPlan& plan, const Field& field,
               std::span<const AnswerString> answers);

  std::uint64_t block() const { return block_; }

  // Cleaned desired contributions: for each desired slot of each server,
  // (server, unit, value) with the side information removed.
  struct DesiredValue {
    int server;
    std::uint32_t unit;
    std::vector<Symbol> value;
  };
  const std::vector<DesiredValue>& desired() const { return desired_; }

 private:
  std::uint64_t block_ = 0;
  std::vector<DesiredValue> desired_;
};

}  // namespace wpir

#endif  // WPIR_ROUND_PLAN_H_
