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

#include "wpir/wire.h"

#include <fmt/format.h>

namespace wpir {
namespace {

void Put(Bytes& out, std::uint64_t value, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint64_t Get(int bytes) {
    if (pos_ + bytes > data_.size()) throw WireError("truncated payload");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

int CoeffBytes(const Field& field) { return field.order() > 256 ? 2 : 1; }

}  // namespace

Bytes EncodeQuery(const QueryToken& q, const Field& field) {
  Bytes out;
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(q.tag()));
  switch (q.tag()) {
    case QueryTag::kNull:
      break;
    case QueryTag::kClean:
      Put(out, static_cast<std::uint64_t>(q.clean_index()), 2);
      break;
    case QueryTag::kStructured: {
      const auto& combos = q.combinations();
      if (combos.size() > 0xFFFF) throw WireError("too many combinations");
      Put(out, combos.size(), 2);
      const int cb = CoeffBytes(field);
      for (const Combination& c : combos) {
        if (c.size() > 0xFF) {
          throw WireError(fmt::format(
              "combination with {} terms exceeds the 255-term limit", c.size()));
        }
        Put(out, c.size(), 1);
        for (const Term& t : c) {
          if (!field.Contains(t.coeff)) throw WireError("coefficient outside the field");
          Put(out, t.file, 2);
          Put(out, t.segment, 4);
          Put(out, t.coeff, cb);
        }
      }
      break;
    }
  }
  return out;
}

QueryToken DecodeQuery(std::span<const std::uint8_t> payload, const Field& field) {
  Reader in(payload);
  const auto version = static_cast<std::uint8_t>(in.Get(1));
  if (version != kWireVersion) {
    throw VersionMismatch(fmt::format("unsupported protocol version {:#04x}", version));
  }
  const auto tag = in.Get(1);
  QueryToken q;
  try {
    switch (tag) {
      case 0:
        q = QueryToken::Null();
        break;
      case 1:
        q = QueryToken::Clean(static_cast<int>(in.Get(2)));
        break;
      case 2: {
        const auto count = in.Get(2);
        const int cb = CoeffBytes(field);
        std::vector<Combination> combos(count);
        for (auto& c : combos) {
          const auto terms = in.Get(1);
          c.resize(terms);
          for (Term& t : c) {
            t.file = static_cast<std::uint16_t>(in.Get(2));
            t.segment = static_cast<std::uint32_t>(in.Get(4));
            t.coeff = static_cast<Symbol>(in.Get(cb));
            if (!field.Contains(t.coeff)) throw WireError("coefficient outside the field");
          }
        }
        q = QueryToken::Structured(std::move(combos));
        break;
      }
      default:
        throw WireError(fmt::format("unknown query tag {}", tag));
    }
  } catch (const std::invalid_argument& e) {
    throw WireError(std::string("malformed query: ") + e.what());
  }
  if (!in.done()) throw WireError("trailing bytes after query");
  return q;
}

Bytes EncodeAnswer(const AnswerString& a, const Field& field) {
  const int bytes = field.bytes_per_symbol();
  if (a.symbols.size() > 0xFFFFFFFFull) throw WireError("answer too long");
  Bytes out;
  out.reserve(4 + a.symbols.size() * bytes);
  Put(out, a.symbols.size(), 4);
  for (Symbol s : a.symbols) Put(out, s, bytes);
  return out;
}

AnswerString DecodeAnswer(std::span<const std::uint8_t> payload,
                          const Field& field) {
  Reader in(payload);
  const auto count = in.Get(4);
  const int bytes = field.bytes_per_symbol();
  if (in.remaining() != count * bytes) {
    throw WireError("answer length disagrees with its symbol count");
  }
  AnswerString a;
  a.bits_per_symbol = field.bits_per_symbol();
  a.symbols.resize(count);
  for (Symbol& s : a.symbols) {
    s = static_cast<Symbol>(in.Get(bytes));
    if (!field.Contains(s)) throw WireError("answer symbol outside the field");
  }
  return a;
}

Bytes Frame(std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxFrameBytes) throw WireError("payload too large");
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload.size());
  Put(out, payload.size(), 4);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bytes Unframe(std::span<const std::uint8_t> buffer) {
  Reader in(buffer);
  const auto length = in.Get(4);
  if (in.remaining() != length) throw WireError("frame length mismatch");
  return Bytes(buffer.begin() + kFrameHeaderBytes, buffer.end());
}

}  // namespace wpir
