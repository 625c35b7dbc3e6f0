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

#include "wpir/mdspir.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "wpir/round_plan.h"
#include "wpir/setting.h"
#include "wpir/sunjafar.h"

namespace wpir {

MdsCode::MdsCode(int servers, int k, FieldPtr field)
    : servers_(servers), k_(k), field_(std::move(field)) {
  if (k_ < 1 || k_ > servers_) {
    throw std::invalid_argument(fmt::format("need 1 <= K <= N, got K={} N={}", k_, servers_));
  }
  if (field_->order() <= static_cast<std::uint32_t>(servers_)) {
    throw std::invalid_argument(fmt::format(
        "{} has too few elements for {} evaluation points", field_->Name(), servers_));
  }
}

std::vector<Symbol> MdsCode::Encode(std::span<const Symbol> row) const {
  if (row.size() != static_cast<std::size_t>(k_)) {
    throw std::invalid_argument("row length must equal K");
  }
  const Field& f = *field_;
  std::vector<Symbol> out(servers_);
  for (int n = 0; n < servers_; ++n) {
    Symbol acc = 0;
    for (int i = k_ - 1; i >= 0; --i) acc = f.Add(f.Mul(acc, point(n)), row[i]);
    out[n] = acc;
  }
  return out;
}

std::vector<Symbol> MdsCode::RecoveryMatrix(std::span<const int> servers) const {
  if (servers.size() != static_cast<std::size_t>(k_)) {
    throw std::invalid_argument(fmt::format("need exactly {} columns", k_));
  }
  std::vector<int> sorted(servers.begin(), servers.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("repeated column index");
  }
  if (sorted.front() < 0 || sorted.back() >= servers_) {
    throw std::invalid_argument("column index out of range");
  }
  const Field& f = *field_;
  std::vector<Symbol> vandermonde(static_cast<std::size_t>(k_) * k_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      vandermonde[i * k_ + j] = f.Pow(point(servers[i]), j);
    }
  }
  auto inv = InvertMatrix(f, vandermonde, k_);
  if (!inv) throw std::logic_error("singular Vandermonde matrix");
  return *inv;
}

std::vector<Symbol> MdsCode::Recover(
    std::span<const std::pair<int, Symbol>> columns) const {
  std::vector<int> idx;
  for (const auto& [server, value] : columns) idx.push_back(server);
  const std::vector<Symbol> inv = RecoveryMatrix(idx);
  const Field& f = *field_;
  std::vector<Symbol> row(k_, 0);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      row[i] = f.Add(row[i], f.Mul(inv[i * k_ + j], columns[j].second));
    }
  }
  return row;
}

std::uint64_t MdsStorage::rows() const {
  return columns.empty() || columns[0].empty() ? 0 : columns[0][0].size();
}

std::span<const Symbol> MdsStorage::column(int server, int file) const {
  if (server < 0 || server >= servers) {
    throw std::out_of_range(fmt::format("server {} not in [0:{}]", server, servers - 1));
  }
  if (file < 1 || file > static_cast<int>(columns[server].size())) {
    throw std::out_of_range(fmt::format("file {} not stored", file));
  }
  return columns[server][file - 1];
}

MdsStorage MdsEncode(const FileLibrary& library, int servers, int k) {
  const MdsCode code(servers, k, library.field());
  if (library.length() % k != 0) {
    throw std::invalid_argument(fmt::format(
        "file length {} is not a multiple of K = {}", library.length(), k));
  }
  const std::uint64_t rows = library.length() / k;
  MdsStorage storage;
  storage.servers = servers;
  storage.k = k;
  storage.field = library.field();
  for (int n = 0; n < servers; ++n) storage.evaluation_points.push_back(code.point(n));
  storage.columns.assign(
      servers, std::vector<std::vector<Symbol>>(library.files(),
                                                std::vector<Symbol>(rows)));
  for (int file = 1; file <= library.files(); ++file) {
    const auto data = library.file(file);
    for (std::uint64_t row = 0; row < rows; ++row) {
      const auto coded = code.Encode(data.subspan(row * k, k));
      for (int n = 0; n < servers; ++n) storage.columns[n][file - 1][row] = coded[n];
    }
  }
  return storage;
}

std::vector<Symbol> MdsRecover(std::span<const std::pair<int, Symbol>> columns,
                               int servers, FieldPtr field) {
  const MdsCode code(servers, static_cast<int>(columns.size()), std::move(field));
  return code.Recover(columns);
}

BuRandomness SampleBuRandomness(int servers, int files, Rng& rng) {
  return BuRandomness{SampleSjRandomness(servers, files, rng).permutations};
}

std::vector<QueryToken> BuQueryOn(int servers, int k,
                                  std::span<const int> files, int theta,
                                  const BuRandomness& rand) {
  const int pos = ThetaPosition(files, theta);
  auto plan = CachedPlan({servers, k, k, 1}, static_cast<int>(files.size()), pos);
  return PermutedQueries(*plan, files, rand.permutations);
}

std::vector<QueryToken> BuQuery(int servers, int k, int files, int theta,
                                const BuRandomness& rand) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  std::vector<int> all(files);
  std::iota(all.begin(), all.end(), 1);
  return BuQueryOn(servers, k, all, theta, rand);
}

AnswerString BuAnswer(const QueryToken& q, const MdsStorage& storage,
                      int server) {
  return EvaluateStructured(
      q, [&](int k) { return storage.column(server, k); }, storage.rows(),
      storage.servers, *storage.field);
}

std::vector<Symbol> BuDecodeOn(int servers, int k, std::span<const int> files,
                               int theta, const BuRandomness& rand,
                               std::span<const AnswerString> answers,
                               const FieldPtr& field) {
  const int pos = ThetaPosition(files, theta);
  auto plan = CachedPlan({servers, k, k, 1}, static_cast<int>(files.size()), pos);
  if (rand.permutations.size() != files.size()) {
    throw std::invalid_argument("randomness does not match the file set");
  }
  const MdsCode code(servers, k, field);
  const Field& f = *field;
  const RoundDecoder decoder(*plan, f, answers);
  const std::uint64_t block = decoder.block();

  // Per unit, the K cleaned coded values in ascending server order.
  std::vector<std::vector<const RoundDecoder::DesiredValue*>> by_unit(plan->units());
  for (const auto& d : decoder.desired()) by_unit[d.unit].push_back(&d);

  std::map<std::vector<int>, std::vector<Symbol>> inverses;
  std::vector<Symbol> out(static_cast<std::size_t>(k) * plan->units() * block, 0);
  for (std::uint32_t u = 0; u < plan->units(); ++u) {
    auto& parts = by_unit[u];
    if (parts.size() != static_cast<std::size_t>(k)) {
      throw std::logic_error("unit not covered by K servers");
    }
    std::vector<int> idx;
    for (const auto* d : parts) idx.push_back(d->server);
    auto it = inverses.find(idx);
    if (it == inverses.end()) it = inverses.emplace(idx, code.RecoveryMatrix(idx)).first;
    const std::vector<Symbol>& inv = it->second;
    const std::uint64_t first_row =
        static_cast<std::uint64_t>(rand.permutations[pos][u]) * block;
    for (std::uint64_t b = 0; b < block; ++b) {
      Symbol* row = out.data() + (first_row + b) * k;
      for (int i = 0; i < k; ++i) {
        Symbol acc = 0;
        for (int j = 0; j < k; ++j) {
          acc = f.Add(acc, f.Mul(inv[i * k + j], parts[j]->value[b]));
        }
        row[i] = acc;
      }
    }
  }
  return out;
}

std::vector<Symbol> BuDecode(int servers, int k, int files, int theta,
                             const BuRandomness& rand,
                             std::span<const AnswerString> answers,
                             const FieldPtr& field) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  std::vector<int> all(files);
  std::iota(all.begin(), all.end(), 1);
  return BuDecodeOn(servers, k, all, theta, rand, answers, field);
}

std::uint64_t BuDownloadTotal(int servers, int k, int files) {
  if (k < 1 || k >= servers) throw std::invalid_argument("need 1 <= K < N");
  return static_cast<std::uint64_t>(k) * servers *
         (IntPow(servers, files) - IntPow(k, files)) / (servers - k);
}

}  // namespace wpir
