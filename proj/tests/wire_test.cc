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

#include <gtest/gtest.h>

#include <vector>

#include "wpir/core.h"
#include "wpir/rng.h"

namespace wpir {
namespace {

void PutBig(Bytes& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Byte-level reference encoder for structured queries.
Bytes ReferenceStructured(const std::vector<Combination>& combos, int coeff_bytes) {
  Bytes out = {0x01, 0x02};
  PutBig(out, combos.size(), 2);
  for (const Combination& c : combos) {
    PutBig(out, c.size(), 1);
    for (const Term& t : c) {
      PutBig(out, t.file, 2);
      PutBig(out, t.segment, 4);
      PutBig(out, t.coeff, coeff_bytes);
    }
  }
  return out;
}

QueryToken RandomStructured(Rng& rng, const Field& f) {
  std::vector<Combination> combos(1 + rng.UniformInt(6));
  for (Combination& c : combos) {
    c.resize(1 + rng.UniformInt(5));
    for (Term& t : c) {
      t.file = static_cast<std::uint16_t>(1 + rng.UniformInt(0xFFFF));
      t.segment = static_cast<std::uint32_t>(1 + rng.UniformInt(0xFFFFFFFEull));
      t.coeff = static_cast<Symbol>(1 + rng.UniformInt(f.order() - 1));
    }
  }
  return QueryToken::Structured(std::move(combos));
}

TEST(WireQueryTest, FixedEncodings) {
  const FieldPtr f = Field::Default();
  EXPECT_EQ(EncodeQuery(QueryToken::Null(), *f), (Bytes{0x01, 0x00}));
  EXPECT_EQ(EncodeQuery(QueryToken::Clean(0x0102), *f), (Bytes{0x01, 0x01, 0x01, 0x02}));
  const std::vector<Combination> combos = {{{1, 7, 3}}, {{2, 0x01020304, 0xFF}, {3, 1, 1}}};
  EXPECT_EQ(EncodeQuery(QueryToken::Structured(combos), *f), ReferenceStructured(combos, 1));
}

TEST(WireQueryTest, WideCoefficientsAboveByteFields) {
  const FieldPtr f = Field::Prime(257);
  const std::vector<Combination> combos = {{{1, 1, 256}, {2, 2, 5}}};
  const Bytes bytes = EncodeQuery(QueryToken::Structured(combos), *f);
  EXPECT_EQ(bytes, ReferenceStructured(combos, 2));
  EXPECT_EQ(DecodeQuery(bytes, *f), QueryToken::Structured(combos));
  // GF(256) still uses one byte.
  EXPECT_EQ(EncodeQuery(QueryToken::Structured({{{1, 1, 5}}}), *Field::Default()).size(),
            2u + 2 + 1 + 2 + 4 + 1);
}

TEST(WireQueryTest, RandomRoundTrips) {
  Rng rng(99);
  for (const FieldPtr& f : {Field::Default(), Field::Prime(7), Field::Prime(65521)}) {
    for (int i = 0; i < 300; ++i) {
      const QueryToken q = RandomStructured(rng, *f);
      EXPECT_EQ(DecodeQuery(EncodeQuery(q, *f), *f), q);
    }
    EXPECT_EQ(DecodeQuery(EncodeQuery(QueryToken::Null(), *f), *f), QueryToken::Null());
    EXPECT_EQ(DecodeQuery(EncodeQuery(QueryToken::Clean(9), *f), *f), QueryToken::Clean(9));
  }
}

TEST(WireQueryTest, TermLimit) {
  const FieldPtr f = Field::Default();
  Combination ok(255), big(256);
  for (std::uint32_t i = 0; i < 256; ++i) {
    if (i < 255) ok[i] = Term{1, i + 1, 1};
    big[i] = Term{1, i + 1, 1};
  }
  EXPECT_NO_THROW(EncodeQuery(QueryToken::Structured({ok}), *f));
  EXPECT_THROW(EncodeQuery(QueryToken::Structured({big}), *f), WireError);
}

TEST(WireQueryTest, RejectsMalformedPayloads) {
  const FieldPtr f = Field::Default();
  EXPECT_THROW(DecodeQuery(Bytes{}, *f), WireError);
  EXPECT_THROW(DecodeQuery(Bytes{0x02, 0x00}, *f), VersionMismatch);
  EXPECT_THROW(DecodeQuery(Bytes{0x01, 0x07}, *f), WireError);
  EXPECT_THROW(DecodeQuery(Bytes{0x01, 0x00, 0x00}, *f), WireError);
  EXPECT_THROW(DecodeQuery(Bytes{0x01, 0x01, 0x00}, *f), WireError);
  const Bytes good = EncodeQuery(QueryToken::Structured({{{1, 2, 3}}}), *f);
  for (std::size_t cut = 0; cut < good.size(); ++cut) {
    EXPECT_THROW(DecodeQuery(std::span(good).first(cut), *f), WireError) << cut;
  }
  // Coefficient 3 is outside GF(3).
  EXPECT_THROW(DecodeQuery(good, *Field::Prime(3)), WireError);
  // File 0 is not a valid index.
  EXPECT_THROW(DecodeQuery(ReferenceStructured({{{0, 1, 1}}}, 1), *f), WireError);
}

TEST(WireAnswerTest, ByteWidths) {
  AnswerString a;
  a.symbols = {1, 2, 3};
  const Bytes narrow = EncodeAnswer(a, *Field::Default());
  EXPECT_EQ(narrow, (Bytes{0, 0, 0, 3, 1, 2, 3}));
  const Bytes wide = EncodeAnswer(a, *Field::Prime(257));
  EXPECT_EQ(wide, (Bytes{0, 0, 0, 3, 0, 1, 0, 2, 0, 3}));
  const Bytes tiny = EncodeAnswer(a, *Field::Prime(7));
  EXPECT_EQ(tiny.size(), 7u);
  EXPECT_EQ(DecodeAnswer(EncodeAnswer(AnswerString{}, *Field::Default()), *Field::Default())
                .symbols.size(),
            0u);
}

TEST(WireAnswerTest, RoundTripAndRejection) {
  Rng rng(3);
  const FieldPtr f = Field::Prime(65521);
  AnswerString a;
  for (int i = 0; i < 500; ++i) a.symbols.push_back(static_cast<Symbol>(rng.UniformInt(65521)));
  const AnswerString back = DecodeAnswer(EncodeAnswer(a, *f), *f);
  EXPECT_EQ(back.symbols, a.symbols);
  EXPECT_THROW(DecodeAnswer(Bytes{0, 0, 0, 2, 1}, *Field::Default()), WireError);
  EXPECT_THROW(DecodeAnswer(Bytes{0, 0, 0, 1, 1, 2}, *Field::Default()), WireError);
  EXPECT_THROW(DecodeAnswer(Bytes{0, 0, 0, 1, 9}, *Field::Prime(7)), WireError);
  EXPECT_THROW(DecodeAnswer(Bytes{0, 0}, *Field::Default()), WireError);
}

TEST(WireFrameTest, LengthPrefix) {
  const Bytes payload = {0xAA, 0xBB, 0xCC};
  const Bytes framed = Frame(payload);
  EXPECT_EQ(framed, (Bytes{0, 0, 0, 3, 0xAA, 0xBB, 0xCC}));
  EXPECT_EQ(Unframe(framed), payload);
  EXPECT_EQ(Unframe(Frame(Bytes{})), Bytes{});
  EXPECT_THROW(Unframe(Bytes{0, 0, 0}), WireError);
  EXPECT_THROW(Unframe(Bytes{0, 0, 0, 4, 1, 2, 3}), WireError);
  EXPECT_THROW(Unframe(Bytes{0, 0, 0, 1, 1, 2}), WireError);
  EXPECT_THROW(Unframe(Bytes{0x7F, 0xFF, 0xFF, 0xFF}), WireError);
}

}  // namespace
}  // namespace wpir
