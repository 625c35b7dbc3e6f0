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

#include "wpir/core.h"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wpir/rng.h"
#include "wpir/setting.h"

namespace wpir {

FileLibrary::FileLibrary(int files, std::uint64_t length, FieldPtr field,
                         std::vector<Symbol> symbols)
    : files_(files),
      length_(length),
      field_(std::move(field)),
      symbols_(std::move(symbols)) {
  if (files_ < 1 || length_ < 1) {
    throw std::invalid_argument("library needs M >= 1 and L >= 1");
  }
  if (symbols_.size() != static_cast<std::size_t>(files_) * length_) {
    throw std::invalid_argument("library symbol count is not M * L");
  }
  for (Symbol s : symbols_) {
    if (!field_->Contains(s)) {
      throw std::invalid_argument("library symbol outside the field");
    }
  }
}

std::span<const Symbol> FileLibrary::file(int index) const {
  if (index < 1 || index > files_) {
    throw std::out_of_range(fmt::format("file {} not in [1:{}]", index, files_));
  }
  return std::span<const Symbol>(symbols_).subspan(
      static_cast<std::size_t>(index - 1) * length_, length_);
}

FileLibrary GenerateLibrary(int files, std::uint64_t length, FieldPtr field,
                            std::uint64_t seed) {
  if (files < 1 || length < 1) {
    throw std::invalid_argument("library needs M >= 1 and L >= 1");
  }
  Rng rng = Rng(seed).Substream("library");
  std::vector<Symbol> symbols(static_cast<std::size_t>(files) * length);
  for (Symbol& s : symbols) {
    s = static_cast<Symbol>(rng.UniformInt(field->order()));
  }
  return FileLibrary(files, length, std::move(field), std::move(symbols));
}

std::string QueryClass::ToString() const {
  if (tag == QueryTag::kNull) return "null";
  const std::string set = fmt::format("{{{}}}", fmt::join(files, ","));
  return tag == QueryTag::kClean ? "clean" + set : set;
}

QueryToken QueryToken::Null() { return QueryToken(); }

QueryToken QueryToken::Clean(int file) {
  if (file < 1 || file > 0xFFFF) {
    throw std::invalid_argument(fmt::format("clean index {} out of range", file));
  }
  QueryToken q;
  q.tag_ = QueryTag::kClean;
  q.clean_index_ = file;
  q.class_ = {file};
  return q;
}

QueryToken QueryToken::Structured(std::vector<Combination> combinations) {
  std::vector<int> files;
  for (const Combination& c : combinations) {
    for (const Term& t : c) {
      if (t.file == 0 || t.segment == 0) {
        throw std::invalid_argument("structured term with zero file/segment");
      }
      if (t.coeff != 0) files.push_back(t.file);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  if (files.empty()) {
    throw std::invalid_argument("structured query references no file");
  }
  QueryToken q;
  q.tag_ = QueryTag::kStructured;
  q.combinations_ = std::move(combinations);
  q.class_ = std::move(files);
  return q;
}

QueryToken QueryToken::Structured(std::vector<Combination> combinations,
                                  const std::vector<int>& claimed) {
  QueryToken q = Structured(std::move(combinations));
  std::vector<int> sorted = claimed;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != q.class_) {
    throw std::invalid_argument(
        fmt::format("claimed class {{{}}} disagrees with payload {{{}}}",
                    fmt::join(sorted, ","), fmt::join(q.class_, ",")));
  }
  return q;
}

QueryClass QueryClassOf(const QueryToken& q) {
  return QueryClass{q.tag(), q.file_class()};
}

std::uint64_t RetrievalTranscript::download_bits() const {
  std::uint64_t d = 0;
  for (const AnswerString& a : answers) d += a.bit_length();
  return d;
}

std::uint64_t TranscriptDownloadBits(const RetrievalTranscript& t) {
  return t.download_bits();
}

AnswerString EvaluateStructured(const QueryToken& q, const FileAccessor& files,
                                std::uint64_t stored_length, int servers,
                                const Field& field) {
  if (q.tag() != QueryTag::kStructured) {
    throw std::invalid_argument("not a structured query");
  }
  const int level = static_cast<int>(q.file_class().size());
  const std::uint64_t blocks = IntPow(servers, level);
  if (stored_length % blocks != 0) {
    throw std::invalid_argument(fmt::format(
        "stored length {} is not a multiple of N^{} = {}", stored_length,
        level, blocks));
  }
  const std::uint64_t block = stored_length / blocks;
  AnswerString answer;
  answer.bits_per_symbol = field.bits_per_symbol();
  answer.symbols.assign(q.combinations().size() * block, 0);
  for (std::size_t c = 0; c < q.combinations().size(); ++c) {
    std::span<Symbol> out(answer.symbols.data() + c * block, block);
    for (const Term& t : q.combinations()[c]) {
      if (t.segment > blocks) {
        throw std::out_of_range(fmt::format(
            "segment {} of file {} outside [1:{}]", t.segment, t.file, blocks));
      }
      if (!field.Contains(t.coeff)) {
        throw std::invalid_argument("coefficient outside the field");
      }
      const std::span<const Symbol> data = files(t.file);
      if (data.size() != stored_length) {
        throw std::invalid_argument("stored file length mismatch");
      }
      field.AddScaled(out, t.coeff, data.subspan((t.segment - 1) * block, block));
    }
  }
  return answer;
}

}  // namespace wpir
