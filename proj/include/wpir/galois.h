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

#ifndef WPIR_GALOIS_H_
#define WPIR_GALOIS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wpir {

// Raw symbol value. Always < Field::order() for the field it belongs to.
using Symbol = std::uint32_t;

enum class FieldKind { kPrime, kBinary };

// Finite field GF(p) for a prime p < 2^16, or GF(2^w) for 1 <= w <= 16 given
// by an irreducible reduction polynomial. Immutable once built; share via
// FieldPtr.
//
// Binary fields use log/antilog tables generated from any primitive element
// (found by search), so the reduction polynomial only needs to be
// irreducible, not primitive.
class Field {
 public:
  // Throws std::invalid_argument unless p is a prime in [2, 65521].
  static std::shared_ptr<const Field> Prime(std::uint32_t p);
  // `poly` is the reduction polynomial as a bitmask including the x^w term,
  // e.g. 0x11B for x^8+x^4+x^3+x+1. Throws unless it is irreducible of
  // degree 1..16.
  static std::shared_ptr<const Field> Binary(std::uint32_t poly);
  // GF(2^w) with a fixed default reduction polynomial.
  static std::shared_ptr<const Field> BinaryDefault(int w);
  // GF(256) with x^8+x^4+x^3+x+1.
  static std::shared_ptr<const Field> Default();
  // Smallest GF(2^w) with at least `min_order` elements.
  static std::shared_ptr<const Field> SmallestBinary(std::uint32_t min_order);
  // Parses "gf256", "gf2^8", "gf2^8:0x11b", "prime:7" or "gf7".
  static std::shared_ptr<const Field> Parse(const std::string& text);

  FieldKind kind() const { return kind_; }
  // p for prime fields, the reduction polynomial for binary fields.
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return order_; }
  // ceil(log2 q): bits charged per downloaded symbol.
  int bits_per_symbol() const { return bits_; }
  // ceil(bits/8): bytes per symbol on the wire.
  int bytes_per_symbol() const { return (bits_ + 7) / 8; }
  std::string Name() const;

  bool operator==(const Field& other) const {
    return kind_ == other.kind_ && modulus_ == other.modulus_;
  }

  Symbol Add(Symbol a, Symbol b) const {
    if (kind_ == FieldKind::kBinary) return a ^ b;
    Symbol s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  Symbol Sub(Symbol a, Symbol b) const {
    if (kind_ == FieldKind::kBinary) return a ^ b;
    return a >= b ? a - b : a + order_ - b;
  }
  Symbol Neg(Symbol a) const {
    if (kind_ == FieldKind::kBinary || a == 0) return a;
    return order_ - a;
  }
  Symbol Mul(Symbol a, Symbol b) const {
    if (kind_ == FieldKind::kPrime) {
      return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % order_);
    }
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  // Throws std::domain_error for a == 0.
  Symbol Inv(Symbol a) const;
  Symbol Div(Symbol a, Symbol b) const { return Mul(a, Inv(b)); }
  Symbol Pow(Symbol a, std::uint64_t e) const;

  // Carry-less multiply then reduce; no tables. Exposed for testing the
  // table path against.
  Symbol MulSlow(Symbol a, Symbol b) const;

  bool Contains(Symbol a) const { return a < order_; }

  // acc[i] += c * src[i]
  void AddScaled(std::span<Symbol> acc, Symbol c,
                 std::span<const Symbol> src) const;

 private:
  Field(FieldKind kind, std::uint32_t modulus);

  FieldKind kind_;
  std::uint32_t modulus_;
  std::uint32_t order_;
  int bits_;
  // Binary only. exp_ has 2*(q-1) entries so log sums need no reduction.
  std::vector<Symbol> exp_;
  std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const Field>;

// True iff the binary polynomial `poly` (bitmask) of degree >= 1 has no factor
// of degree 1..deg/2.
bool IsIrreducible(std::uint32_t poly);
bool IsPrime(std::uint32_t n);

// A value tagged with its field, for call sites that want mismatch checks.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Symbol value);

  const FieldPtr& field() const { return field_; }
  Symbol value() const { return value_; }

  bool operator==(const FieldElement& other) const {
    return *field_ == *other.field_ && value_ == other.value_;
  }

 private:
  FieldPtr field_;
  Symbol value_;
};

// Throw std::invalid_argument when operands come from different fields.
FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator*(const FieldElement& a, const FieldElement& b);
FieldElement Inverse(const FieldElement& a);

// Row-major n x n inverse by Gauss-Jordan elimination; nullopt if singular.
std::optional<std::vector<Symbol>> InvertMatrix(const Field& field,
                                                std::span<const Symbol> a,
                                                int n);

}  // namespace wpir

#endif  // WPIR_GALOIS_H_
