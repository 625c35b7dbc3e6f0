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

#include "wpir/wpir.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "wpir/sunjafar.h"
#include "wpir/tpir.h"

namespace wpir {

MPrimeDistribution::MPrimeDistribution(std::vector<Rational> pmf)
    : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw std::invalid_argument("empty M' distribution");
  Rational total = 0;
  for (const Rational& p : pmf_) {
    if (p < 0) throw std::invalid_argument("negative probability mass");
    total += p;
  }
  const Rational tolerance(1, 1000000000000LL);
  if (abs(total - 1) > tolerance) {
    throw std::invalid_argument(fmt::format(
        "M' distribution sums to {}, not 1", ToDouble(total)));
  }
  if (total != 1) {
    for (Rational& p : pmf_) p /= total;
  }
}

MPrimeDistribution MPrimeDistribution::FromDoubles(const std::vector<double>& pmf) {
  std::vector<Rational> exact;
  for (double p : pmf) exact.push_back(FromDouble(p));
  return MPrimeDistribution(std::move(exact));
}

MPrimeDistribution MPrimeDistribution::Parse(const std::string& text) {
  std::vector<Rational> pmf;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) pmf.push_back(ParseRational(item));
  return MPrimeDistribution(std::move(pmf));
}

MPrimeDistribution MPrimeDistribution::PointMass(int files, int m_prime) {
  if (files < 1 || m_prime < 0 || m_prime >= files) {
    throw std::invalid_argument(
        fmt::format("point mass at {} outside [0:{}]", m_prime, files - 1));
  }
  std::vector<Rational> pmf(files, Rational(0));
  pmf[m_prime] = 1;
  return MPrimeDistribution(std::move(pmf));
}

MPrimeDistribution MPrimeDistribution::TwoPoint(int files, const Rational& p0) {
  if (files < 1) throw std::invalid_argument("need at least one file");
  if (p0 < 0 || p0 > 1) throw std::invalid_argument("P(0) outside [0, 1]");
  std::vector<Rational> pmf(files, Rational(0));
  pmf[0] += p0;
  pmf[files - 1] += 1 - p0;
  return MPrimeDistribution(std::move(pmf));
}

std::string MPrimeDistribution::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    if (i > 0) out += ",";
    out += wpir::ToString(pmf_[i]);
  }
  return out;
}

int SampleMPrime(const MPrimeDistribution& dist, Rng& rng) {
  const double u = rng.UniformReal();
  double cumulative = 0;
  int last = 0;
  for (int m = 0; m < dist.files(); ++m) {
    if (dist.p(m) == 0) continue;
    last = m;
    cumulative += dist.probability(m);
    if (u < cumulative) return m;
  }
  return last;
}

SuperSegmentation SuperSegmentMap(int servers, int files, int level) {
  if (level < 2 || level > files) {
    throw std::invalid_argument(
        fmt::format("super-segment level {} outside [2:{}]", level, files));
  }
  SuperSegmentation map;
  map.level = level;
  map.block_size = IntPow(servers, files - level);
  const std::uint64_t count = IntPow(servers, level);
  for (std::uint64_t i = 0; i < count; ++i) {
    map.blocks.emplace_back(i * map.block_size + 1, (i + 1) * map.block_size);
  }
  return map;
}

WpirRandomness SampleWpirRandomness(const PirSetting& setting, int theta,
                                    const MPrimeDistribution& dist,
                                    const Field& field, Rng& rng) {
  setting.Validate();
  if (theta < 1 || theta > setting.files) {
    throw std::invalid_argument(
        fmt::format("theta {} not in [1:{}]", theta, setting.files));
  }
  if (dist.files() != setting.files) {
    throw std::invalid_argument("M' distribution length differs from M");
  }
  WpirRandomness rand;
  Rng m_stream = rng.Substream("m_prime");
  rand.m_prime = SampleMPrime(dist, m_stream);
  if (rand.m_prime == 0) {
    Rng s_stream = rng.Substream("clean_target");
    const int count = setting.variant == Variant::kMds ? setting.r : 1;
    for (auto s : s_stream.Subset(setting.servers, count)) {
      rand.clean_servers.push_back(static_cast<int>(s));
    }
    return rand;
  }
  Rng j_stream = rng.Substream("decoys");
  for (auto i : j_stream.Subset(setting.files - 1, rand.m_prime)) {
    const int file = static_cast<int>(i) + 1;
    rand.decoys.push_back(file < theta ? file : file + 1);
  }
  Rng base = rng.Substream("base");
  const int m = rand.m_prime + 1;
  if (setting.variant == Variant::kTCollusion) {
    TsjRandomness t = SampleTsjRandomness(setting.servers, m, field, base);
    rand.units = t.units;
    rand.matrices = std::move(t.matrices);
  } else {
    rand.permutations = SampleSjRandomness(setting.servers, m, base).permutations;
  }
  return rand;
}

std::vector<int> ParticipatingFiles(int theta, const WpirRandomness& rand) {
  std::vector<int> files = rand.decoys;
  files.push_back(theta);
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

void CheckSession(const PirSetting& setting, int theta,
                  const WpirRandomness& rand) {
  setting.Validate();
  if (theta < 1 || theta > setting.files) {
    throw std::invalid_argument(
        fmt::format("theta {} not in [1:{}]", theta, setting.files));
  }
  if (rand.m_prime < 0 || rand.m_prime >= setting.files) {
    throw std::invalid_argument("M' outside [0:M-1]");
  }
  if (rand.m_prime == 0) {
    const std::size_t want = setting.variant == Variant::kMds ? setting.r : 1;
    if (rand.clean_servers.size() != want) {
      throw std::invalid_argument("wrong number of clean-download servers");
    }
    for (int s : rand.clean_servers) {
      if (s < 0 || s >= setting.servers) {
        throw std::invalid_argument("clean-download server out of range");
      }
    }
    return;
  }
  if (rand.decoys.size() != static_cast<std::size_t>(rand.m_prime)) {
    throw std::invalid_argument("decoy count differs from M'");
  }
  for (int j : rand.decoys) {
    if (j < 1 || j > setting.files || j == theta) {
      throw std::invalid_argument("invalid decoy file");
    }
  }
}

}  // namespace

std::vector<QueryToken> WpirQuery(const PirSetting& setting, int theta,
                                  const WpirRandomness& rand,
                                  const Field& field) {
  CheckSession(setting, theta, rand);
  const int n = setting.servers;
  if (rand.m_prime == 0) {
    std::vector<QueryToken> out(n, QueryToken::Null());
    for (int s : rand.clean_servers) out[s] = QueryToken::Clean(theta);
    return out;
  }
  const std::vector<int> files = ParticipatingFiles(theta, rand);
  switch (setting.variant) {
    case Variant::kReplicated:
      return SjQueryOn(n, files, theta, SjRandomness{rand.permutations});
    case Variant::kMds:
      return BuQueryOn(n, setting.r, files, theta,
                       BuRandomness{rand.permutations});
    case Variant::kTCollusion:
      return TsjQueryOn(n, setting.r, files, theta,
                        TsjRandomness{rand.units, rand.matrices}, field);
  }
  throw std::logic_error("unknown variant");
}

ServerStore ServerStore::Replica(std::shared_ptr<const FileLibrary> library,
                                 int servers, int index) {
  if (index < 0 || index >= servers) {
    throw std::invalid_argument("server index out of range");
  }
  ServerStore store;
  store.index_ = index;
  store.servers_ = servers;
  store.library_ = std::move(library);
  return store;
}

ServerStore ServerStore::Coded(std::shared_ptr<const MdsStorage> storage,
                               int index) {
  if (index < 0 || index >= storage->servers) {
    throw std::invalid_argument("server index out of range");
  }
  ServerStore store;
  store.index_ = index;
  store.servers_ = storage->servers;
  store.storage_ = std::move(storage);
  return store;
}

const Field& ServerStore::field() const {
  return library_ ? *library_->field() : *storage_->field;
}

std::span<const Symbol> ServerStore::stored(int file) const {
  return library_ ? library_->file(file) : storage_->column(index_, file);
}

std::uint64_t ServerStore::stored_length() const {
  return library_ ? library_->length() : storage_->rows();
}

std::vector<ServerStore> ProvisionServers(
    const PirSetting& setting, std::shared_ptr<const FileLibrary> library) {
  setting.Validate();
  if (library->files() != setting.files) {
    throw std::invalid_argument("library file count differs from M");
  }
  std::vector<ServerStore> out;
  if (setting.variant == Variant::kMds) {
    if (library->length() % (setting.r * setting.segments()) != 0) {
      throw std::invalid_argument(fmt::format(
          "MDS storage needs L to be a multiple of K*N^M = {}",
          setting.r * setting.segments()));
    }
    auto storage = std::make_shared<const MdsStorage>(
        MdsEncode(*library, setting.servers, setting.r));
    for (int n = 0; n < setting.servers; ++n) {
      out.push_back(ServerStore::Coded(storage, n));
    }
    return out;
  }
  if (library->length() % setting.segments() != 0) {
    throw std::invalid_argument(fmt::format(
        "L must be a multiple of N^M = {}", setting.segments()));
  }
  for (int n = 0; n < setting.servers; ++n) {
    out.push_back(ServerStore::Replica(library, setting.servers, n));
  }
  return out;
}

AnswerString WpirAnswer(const QueryToken& token, const ServerStore& store) {
  AnswerString answer;
  answer.bits_per_symbol = store.field().bits_per_symbol();
  switch (token.tag()) {
    case QueryTag::kNull:
      return answer;
    case QueryTag::kClean: {
      const auto data = store.stored(token.clean_index());
      answer.symbols.assign(data.begin(), data.end());
      return answer;
    }
    case QueryTag::kStructured:
      return EvaluateStructured(
          token, [&](int k) { return store.stored(k); }, store.stored_length(),
          store.servers(), store.field());
  }
  throw std::invalid_argument("malformed query tag");
}

std::vector<Symbol> WpirDecode(const PirSetting& setting, int theta,
                               const WpirRandomness& rand,
                               std::span<const AnswerString> answers,
                               const FieldPtr& field) {
  CheckSession(setting, theta, rand);
  const int n = setting.servers;
  if (answers.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("need one answer per server");
  }
  if (rand.m_prime == 0) {
    for (int s = 0; s < n; ++s) {
      const bool clean = std::find(rand.clean_servers.begin(),
                                   rand.clean_servers.end(),
                                   s) != rand.clean_servers.end();
      if (!clean && !answers[s].symbols.empty()) {
        throw std::invalid_argument("Null query produced a non-empty answer");
      }
    }
    if (setting.variant != Variant::kMds) {
      return answers[rand.clean_servers[0]].symbols;
    }
    const int k = setting.r;
    const MdsCode code(n, k, field);
    const std::vector<int>& idx = rand.clean_servers;
    const std::size_t rows = answers[idx[0]].symbols.size();
    for (int s : idx) {
      if (answers[s].symbols.size() != rows) {
        throw std::invalid_argument("clean columns differ in length");
      }
    }
    const std::vector<Symbol> inv = code.RecoveryMatrix(idx);
    const Field& f = *field;
    std::vector<Symbol> out(rows * k, 0);
    for (std::size_t row = 0; row < rows; ++row) {
      for (int i = 0; i < k; ++i) {
        Symbol acc = 0;
        for (int j = 0; j < k; ++j) {
          acc = f.Add(acc, f.Mul(inv[i * k + j], answers[idx[j]].symbols[row]));
        }
        out[row * k + i] = acc;
      }
    }
    return out;
  }
  const std::vector<int> files = ParticipatingFiles(theta, rand);
  switch (setting.variant) {
    case Variant::kReplicated:
      return SjDecodeOn(n, files, theta, SjRandomness{rand.permutations},
                        answers, *field);
    case Variant::kMds:
      return BuDecodeOn(n, setting.r, files, theta,
                        BuRandomness{rand.permutations}, answers, field);
    case Variant::kTCollusion:
      return TsjDecodeOn(n, setting.r, files, theta,
                         TsjRandomness{rand.units, rand.matrices}, answers,
                         *field);
  }
  throw std::logic_error("unknown variant");
}

Rational WpirRate(const PirSetting& setting, const MPrimeDistribution& dist) {
  setting.Validate();
  if (dist.files() != setting.files) {
    throw std::invalid_argument("M' distribution length differs from M");
  }
  const Rational ratio(setting.r, setting.servers);
  Rational expectation = 0;
  for (int m = 0; m < dist.files(); ++m) {
    expectation += dist.p(m) * Pow(ratio, m + 1);
  }
  return (1 - ratio) / (1 - expectation);
}

}  // namespace wpir
