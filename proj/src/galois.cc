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

#include "wpir/galois.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>

#include <fmt/format.h>

namespace wpir {
namespace {

int Degree(std::uint32_t poly) { return 31 - std::countl_zero(poly); }

// Remainder of binary polynomial division.
std::uint32_t PolyMod(std::uint32_t a, std::uint32_t b) {
  const int db = Degree(b);
  for (int da = Degree(a); a != 0 && da >= db; da = Degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

constexpr std::uint32_t kDefaultPolys[17] = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

}  // namespace

bool IsIrreducible(std::uint32_t poly) {
  if (poly < 2) return false;
  const int d = Degree(poly);
  // Every polynomial of degree 1..d/2 is a candidate factor.
  for (std::uint32_t f = 2; Degree(f) <= d / 2; ++f) {
    if (PolyMod(poly, f) == 0) return false;
  }
  return true;
}

bool IsPrime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Field::Field(FieldKind kind, std::uint32_t modulus)
    : kind_(kind), modulus_(modulus) {
  if (kind == FieldKind::kPrime) {
    order_ = modulus;
    bits_ = std::bit_width(modulus - 1);
    if (bits_ == 0) bits_ = 1;
    return;
  }
  const int w = Degree(modulus);
  order_ = 1u << w;
  bits_ = w;
  // Antilog table from a primitive element.
  const std::uint32_t n = order_ - 1;
  exp_.assign(2 * n, 0);
  log_.assign(order_, 0);
  for (Symbol g = 1; g < order_; ++g) {
    Symbol x = 1;
    std::uint32_t period = 0;
    do {
      x = MulSlow(x, g);
      ++period;
    } while (x != 1);
    if (period != n) continue;
    x = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      exp_[i] = x;
      exp_[i + n] = x;
      log_[x] = i;
      x = MulSlow(x, g);
    }
    return;
  }
  throw std::logic_error("no primitive element found");
}

std::shared_ptr<const Field> Field::Prime(std::uint32_t p) {
  if (p > 65521 || !IsPrime(p)) {
    throw std::invalid_argument(fmt::format("{} is not a supported prime", p));
  }
  return std::shared_ptr<const Field>(new Field(FieldKind::kPrime, p));
}

std::shared_ptr<const Field> Field::Binary(std::uint32_t poly) {
  const int d = poly == 0 ? 0 : Degree(poly);
  if (d < 1 || d > 16) {
    throw std::invalid_argument(
        fmt::format("reduction polynomial {:#x} must have degree 1..16", poly));
  }
  if (!IsIrreducible(poly)) {
    throw std::invalid_argument(
        fmt::format("reduction polynomial {:#x} is reducible", poly));
  }
  return std::shared_ptr<const Field>(new Field(FieldKind::kBinary, poly));
}

std::shared_ptr<const Field> Field::BinaryDefault(int w) {
  if (w < 1 || w > 16) {
    throw std::invalid_argument(fmt::format("GF(2^{}) unsupported", w));
  }
  return Binary(kDefaultPolys[w]);
}

std::shared_ptr<const Field> Field::Default() {
  static const FieldPtr kGf256 = Binary(0x11B);
  return kGf256;
}

std::shared_ptr<const Field> Field::SmallestBinary(std::uint32_t min_order) {
  for (int w = 1; w <= 16; ++w) {
    if ((1u << w) >= min_order) return BinaryDefault(w);
  }
  throw std::invalid_argument(
      fmt::format("no binary field with {} elements", min_order));
}

std::shared_ptr<const Field> Field::Parse(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      text.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  auto number = [&](const std::string& s) -> std::uint32_t {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw std::invalid_argument(fmt::format("bad field spec '{}'", raw));
    }
    return static_cast<std::uint32_t>(v);
  };
  if (text.rfind("prime:", 0) == 0) return Prime(number(text.substr(6)));
  if (text.rfind("gf2^", 0) == 0) {
    const std::string rest = text.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      return BinaryDefault(static_cast<int>(number(rest)));
    }
    const auto w = number(rest.substr(0, colon));
    FieldPtr f = Binary(number(rest.substr(colon + 1)));
    if (f->bits_per_symbol() != static_cast<int>(w)) {
      throw std::invalid_argument(
          fmt::format("polynomial degree does not match w in '{}'", raw));
    }
    return f;
  }
  if (text.rfind("gf", 0) == 0) {
    const std::uint32_t q = number(text.substr(2));
    if (q >= 2 && std::has_single_bit(q) && q > 2) {
      return BinaryDefault(std::countr_zero(q));
    }
    return Prime(q);
  }
  throw std::invalid_argument(fmt::format("bad field spec '{}'", raw));
}

std::string Field::Name() const {
  if (kind_ == FieldKind::kPrime) return fmt::format("GF({})", order_);
  return fmt::format("GF(2^{}):{:#x}", bits_, modulus_);
}

Symbol Field::MulSlow(Symbol a, Symbol b) const {
  if (kind_ == FieldKind::kPrime) {
    return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % order_);
  }
  std::uint64_t product = 0;
  for (int i = 0; i < 32; ++i) {
    if ((b >> i) & 1u) product ^= static_cast<std::uint64_t>(a) << i;
  }
  const int d = Degree(modulus_);
  for (int i = 63; i >= d; --i) {
    if ((product >> i) & 1u) {
      product ^= static_cast<std::uint64_t>(modulus_) << (i - d);
    }
  }
  return static_cast<Symbol>(product);
}

Symbol Field::Inv(Symbol a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
  if (kind_ == FieldKind::kBinary) {
    const std::uint32_t n = order_ - 1;
    return exp_[(n - log_[a]) % n];
  }
  return Pow(a, order_ - 2);
}

Symbol Field::Pow(Symbol a, std::uint64_t e) const {
  Symbol result = 1;
  Symbol base = a;
  while (e != 0) {
    if (e & 1u) result = Mul(result, base);
    base = Mul(base, base);
    e >>= 1;
  }
  return result;
}

void Field::AddScaled(std::span<Symbol> acc, Symbol c,
                      std::span<const Symbol> src) const {
  if (c == 0) return;
  const std::size_t n = std::min(acc.size(), src.size());
  if (c == 1) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = Add(acc[i], src[i]);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) acc[i] = Add(acc[i], Mul(c, src[i]));
}

FieldElement::FieldElement(FieldPtr field, Symbol value)
    : field_(std::move(field)), value_(value) {
  if (!field_->Contains(value_)) {
    throw std::out_of_range(
        fmt::format("{} is not an element of {}", value_, field_->Name()));
  }
}

namespace {
const Field& Common(const FieldElement& a, const FieldElement& b) {
  if (!(*a.field() == *b.field())) {
    throw std::invalid_argument(fmt::format(
        "field mismatch: {} vs {}", a.field()->Name(), b.field()->Name()));
  }
  return *a.field();
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return FieldElement(a.field(), Common(a, b).Add(a.value(), b.value()));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return FieldElement(a.field(), Common(a, b).Sub(a.value(), b.value()));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return FieldElement(a.field(), Common(a, b).Mul(a.value(), b.value()));
}

FieldElement Inverse(const FieldElement& a) {
  return FieldElement(a.field(), a.field()->Inv(a.value()));
}

std::optional<std::vector<Symbol>> InvertMatrix(const Field& field,
                                                std::span<const Symbol> a,
                                                int n) {
  const auto un = static_cast<std::size_t>(n);
  if (a.size() != un * un) throw std::invalid_argument("matrix is not n x n");
  std::vector<Symbol> m(a.begin(), a.end());
  std::vector<Symbol> inv(un * un, 0);
  for (std::size_t i = 0; i < un; ++i) inv[i * un + i] = 1;
  for (std::size_t col = 0; col < un; ++col) {
    std::size_t pivot = col;
    while (pivot < un && m[pivot * un + col] == 0) ++pivot;
    if (pivot == un) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < un; ++j) {
        std::swap(m[pivot * un + j], m[col * un + j]);
        std::swap(inv[pivot * un + j], inv[col * un + j]);
      }
    }
    const Symbol scale = field.Inv(m[col * un + col]);
    for (std::size_t j = 0; j < un; ++j) {
      m[col * un + j] = field.Mul(m[col * un + j], scale);
      inv[col * un + j] = field.Mul(inv[col * un + j], scale);
    }
    for (std::size_t row = 0; row < un; ++row) {
      const Symbol f = m[row * un + col];
      if (row == col || f == 0) continue;
      const Symbol nf = field.Neg(f);
      field.AddScaled(std::span<Symbol>(m).subspan(row * un, un), nf,
                      std::span<const Symbol>(m).subspan(col * un, un));
      field.AddScaled(std::span<Symbol>(inv).subspan(row * un, un), nf,
                      std::span<const Symbol>(inv).subspan(col * un, un));
    }
  }
  return inv;
}

}  // namespace wpir
