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

// Domain types shared by every scheme. File indices are 1-based ([1:M]),
// segment indices are 1-based ([1:L]) and server indices are 0-based
// ([0:N-1]).

#ifndef WPIR_CORE_H_
#define WPIR_CORE_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpir/galois.h"

namespace wpir {

// M files of L symbols each, drawn i.i.d. uniform over the field.
class FileLibrary {
 public:
  FileLibrary(int files, std::uint64_t length, FieldPtr field,
              std::vector<Symbol> symbols);

  int files() const { return files_; }
  std::uint64_t length() const { return length_; }
  const FieldPtr& field() const { return field_; }
  // File `index` in [1:M].
  std::span<const Symbol> file(int index) const;

  bool operator==(const FileLibrary& other) const {
    return files_ == other.files_ && length_ == other.length_ &&
           *field_ == *other.field_ && symbols_ == other.symbols_;
  }

 private:
  int files_;
  std::uint64_t length_;
  FieldPtr field_;
  std::vector<Symbol> symbols_;
};

// Deterministic in (files, length, field, seed). Throws on zero sizes.
FileLibrary GenerateLibrary(int files, std::uint64_t length, FieldPtr field,
                            std::uint64_t seed);

enum class QueryTag : std::uint8_t { kNull = 0, kClean = 1, kStructured = 2 };

// coeff * (segment `segment` of file `file`). For super-segmented queries the
// segment index addresses a whole block and the term is applied per offset.
struct Term {
  std::uint16_t file = 0;
  std::uint32_t segment = 0;
  Symbol coeff = 1;

  auto operator<=>(const Term&) const = default;
};

// One requested linear combination; answered with one symbol per segment
// of the block size in force.
using Combination = std::vector<Term>;

// What a server can tell about theta from one query: nothing (Null), the
// exact file (Clean), or the set of files referenced (Structured).
struct QueryClass {
  QueryTag tag = QueryTag::kNull;
  std::vector<int> files;  // sorted; empty for Null

  std::string ToString() const;
  auto operator<=>(const QueryClass&) const = default;
};

class QueryToken {
 public:
  QueryToken() = default;

  static QueryToken Null();
  static QueryToken Clean(int file);
  // Derives the class from the combinations. Throws std::invalid_argument if
  // any term has file 0 or segment 0, or no term has a nonzero coefficient.
  static QueryToken Structured(std::vector<Combination> combinations);
  // As above, and throws unless `claimed` matches the derived class.
  static QueryToken Structured(std::vector<Combination> combinations,
                               const std::vector<int>& claimed);

  QueryTag tag() const { return tag_; }
  int clean_index() const { return clean_index_; }
  const std::vector<Combination>& combinations() const { return combinations_; }
  // Files referenced with a nonzero coefficient, sorted.
  const std::vector<int>& file_class() const { return class_; }

  bool operator==(const QueryToken&) const = default;

 private:
  QueryTag tag_ = QueryTag::kNull;
  int clean_index_ = 0;
  std::vector<Combination> combinations_;
  std::vector<int> class_;
};

// Null -> bottom, Clean(k) -> {k}, Structured -> its file set.
QueryClass QueryClassOf(const QueryToken& q);

// Symbols returned by one server.
struct AnswerString {
  std::vector<Symbol> symbols;
  int bits_per_symbol = 8;

  std::uint64_t bit_length() const {
    return symbols.size() * static_cast<std::uint64_t>(bits_per_symbol);
  }
  bool operator==(const AnswerString&) const = default;
};

struct RetrievalTranscript {
  int theta = 1;
  std::vector<QueryToken> queries;
  std::vector<AnswerString> answers;
  std::uint64_t seed = 0;
  // Bytes of framing moved in addition to the answer payloads.
  std::uint64_t framing_bytes = 0;

  // D: total answer bits over all servers.
  std::uint64_t download_bits() const;
};

std::uint64_t TranscriptDownloadBits(const RetrievalTranscript& t);

// Stored symbol sequence of file k as held by one server: the file itself
// under replication, the server's coded column under MDS storage.
using FileAccessor = std::function<std::span<const Symbol>(int file)>;

// Server-side evaluation of a Structured query. With |class| = s the stored
// length must be a multiple of N^s; each segment index addresses a block of
// stored_length / N^s consecutive symbols and every combination is answered
// with one symbol per block offset, in offset order. Throws std::out_of_range
// for segment indices outside [1:N^s] and std::invalid_argument for Null or
// Clean tokens.
AnswerString EvaluateStructured(const QueryToken& q, const FileAccessor& files,
                                std::uint64_t stored_length, int servers,
                                const Field& field);

}  // namespace wpir

#endif  // WPIR_CORE_H_
