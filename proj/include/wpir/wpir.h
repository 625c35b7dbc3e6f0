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

// Time-sharing wrapper over the three base schemes.
//
// The client draws M' from a chosen pmf on [0:M-1]. With M' = 0 it downloads
// W_theta in the clear from one random server (K random servers under MDS
// storage) and sends Null everywhere else. With M' >= 1 it runs the base
// scheme on theta plus M' random decoys, treating each file as N^(M'+1)
// super-segments of N^(M-M'-1) consecutive original segments.
#ifndef WPIR_WPIR_H_
#define WPIR_WPIR_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"
#include "wpir/mdspir.h"
#include "wpir/rational.h"
#include "wpir/rng.h"
#include "wpir/setting.h"

namespace wpir {

class MPrimeDistribution {
 public:
  // pmf[m] = P(M' = m) for m in [0:M-1]. Throws std::invalid_argument on an
  // empty pmf, a negative entry or a total off 1 by more than 1e-12; an
  // accepted pmf is rescaled to sum to exactly 1.
  explicit MPrimeDistribution(std::vector<Rational> pmf);

  static MPrimeDistribution FromDoubles(const std::vector<double>& pmf);
  // Comma-separated masses, e.g. "0.5,0.5" or "1/3,0,2/3".
  static MPrimeDistribution Parse(const std::string& text);
  static MPrimeDistribution PointMass(int files, int m_prime);
  // P(0) = p0, P(M-1) = 1 - p0.
  static MPrimeDistribution TwoPoint(int files, const Rational& p0);

  // M, the number of files the pmf is defined for.
  int files() const { return static_cast<int>(pmf_.size()); }
  const std::vector<Rational>& pmf() const { return pmf_; }
  const Rational& p(int m) const { return pmf_.at(m); }
  double probability(int m) const { return ToDouble(pmf_.at(m)); }
  std::string ToString() const;

  bool operator==(const MPrimeDistribution&) const = default;

 private:
  std::vector<Rational> pmf_;
};

int SampleMPrime(const MPrimeDistribution& dist, Rng& rng);

struct SuperSegmentation {
  int level = 0;                // s
  std::uint64_t block_size = 0;  // N^(M-s)
  // blocks[i] = {first, last}, 1-based and inclusive, for super-segment i+1.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
};

// Throws std::invalid_argument unless 2 <= s <= M.
SuperSegmentation SuperSegmentMap(int servers, int files, int level);

struct WpirRandomness {
  int m_prime = 0;
  // M' = 0: the server (or the K servers for MDS) getting Clean(theta).
  std::vector<int> clean_servers;
  // M' >= 1: the decoys J, sorted, and the base-scheme randomness for the
  // files J + {theta} at level M'+1.
  std::vector<int> decoys;
  std::vector<std::vector<std::uint32_t>> permutations;  // replicated / MDS
  int units = 0;                                         // T-collusion
  std::vector<std::vector<Symbol>> matrices;             // T-collusion

  bool operator==(const WpirRandomness&) const = default;
};

// Draws M', then S, then J, then the base randomness, each from its own
// substream of `rng`.
WpirRandomness SampleWpirRandomness(const PirSetting& setting, int theta,
                                    const MPrimeDistribution& dist,
                                    const Field& field, Rng& rng);

// Sorted J + {theta}.
std::vector<int> ParticipatingFiles(int theta, const WpirRandomness& rand);

// Token n for server n. Throws std::invalid_argument for theta out of range
// or randomness inconsistent with the setting.
std::vector<QueryToken> WpirQuery(const PirSetting& setting, int theta,
                                  const WpirRandomness& rand,
                                  const Field& field);

// What one server stores: a replica of the library, or its coded columns.
class ServerStore {
 public:
  static ServerStore Replica(std::shared_ptr<const FileLibrary> library,
                             int servers, int index);
  static ServerStore Coded(std::shared_ptr<const MdsStorage> storage,
                           int index);

  int index() const { return index_; }
  int servers() const { return servers_; }
  const Field& field() const;
  // File k as stored here: the file itself or this server's column.
  std::span<const Symbol> stored(int file) const;
  std::uint64_t stored_length() const;

 private:
  int index_ = 0;
  int servers_ = 0;
  std::shared_ptr<const FileLibrary> library_;
  std::shared_ptr<const MdsStorage> storage_;
};

// All N server stores for a library. MDS storage needs L = K * N^M, the
// other variants L = N^M (any multiple of N^M also works).
std::vector<ServerStore> ProvisionServers(const PirSetting& setting,
                                          std::shared_ptr<const FileLibrary> library);

// Clean -> the stored file, Null -> empty, Structured -> super-segmented
// linear combinations.
AnswerString WpirAnswer(const QueryToken& token, const ServerStore& store);

std::vector<Symbol> WpirDecode(const PirSetting& setting, int theta,
                               const WpirRandomness& rand,
                               std::span<const AnswerString> answers,
                               const FieldPtr& field);

// (1 - r/N) / (1 - E[(r/N)^(M'+1)]). Throws for r >= N or a pmf whose
// length is not M.
Rational WpirRate(const PirSetting& setting, const MPrimeDistribution& dist);

}  // namespace wpir

#endif  // WPIR_WPIR_H_
