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

#include "wpir/rational.h"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace wpir {

using boost::multiprecision::cpp_int;

double ToDouble(const Rational& x) { return x.convert_to<double>(); }

std::string ToString(const Rational& x) {
  const cpp_int num = boost::multiprecision::numerator(x);
  const cpp_int den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational FromDouble(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // 53-bit integer mantissa times a power of two.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{cpp_int(scaled)};
  if (exponent > 0) {
    r *= Rational(cpp_int(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(cpp_int(1) << -exponent);
  }
  return r;
}

namespace {

cpp_int Floor(const Rational& x) {
  const cpp_int num = boost::multiprecision::numerator(x);
  const cpp_int den = boost::multiprecision::denominator(x);
  cpp_int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

// Stern-Brocot descent on the closed interval [lo, hi], 0 <= lo <= hi.
Rational Simplest(const Rational& lo, const Rational& hi) {
  const cpp_int a = Floor(lo);
  if (Rational(a) == lo) return lo;
  if (Rational(a + 1) <= hi) return Rational(a + 1);
  return Rational(a) + 1 / Simplest(1 / (hi - a), 1 / (lo - a));
}

}  // namespace

Rational SimplestRationalNear(double x, double tolerance) {
  if (!std::isfinite(x) || !(tolerance >= 0)) {
    throw std::invalid_argument("need a finite value and tolerance >= 0");
  }
  const Rational lo = FromDouble(x) - FromDouble(tolerance);
  const Rational hi = FromDouble(x) + FromDouble(tolerance);
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -Simplest(-hi, -lo);
  return Simplest(lo, hi);
}

Rational ParseRational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("cannot parse number '" + raw + "'");
  };
  if (text.empty()) return fail();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Rational den = ParseRational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
    return ParseRational(text.substr(0, slash)) / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  cpp_int digits = 0;
  int scale = 0;
  bool any = false;
  bool point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (point) ++scale;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!any) return fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    std::size_t used = 0;
    try {
      exponent = std::stoi(text.substr(i + 1), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != text.size() - i - 1) return fail();
  }
  exponent -= scale;
  Rational r(digits);
  const cpp_int ten_power = boost::multiprecision::pow(cpp_int(10),
                                                       std::abs(exponent));
  if (exponent >= 0) {
    r *= Rational(ten_power);
  } else {
    r /= Rational(ten_power);
  }
  return negative ? Rational(-r) : r;
}

Rational Pow(const Rational& base, int exponent) {
  Rational result = 1;
  Rational b = exponent >= 0 ? base : Rational(1) / base;
  for (int e = std::abs(exponent); e > 0; --e) result *= b;
  return result;
}

}  // namespace wpir
