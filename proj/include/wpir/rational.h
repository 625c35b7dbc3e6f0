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

#ifndef WPIR_RATIONAL_H_
#define WPIR_RATIONAL_H_

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace wpir {

// Exact rationals for rates and probability masses.
using Rational = boost::multiprecision::cpp_rational;

double ToDouble(const Rational& x);
// "p/q", or "p" when the denominator is 1.
std::string ToString(const Rational& x);
// The exact binary value of a finite double.
Rational FromDouble(double x);
// The rational with the smallest denominator in [x - tolerance, x + tolerance].
Rational SimplestRationalNear(double x, double tolerance);
// Parses "3/4", "0.125", "-2", "1e-3".
Rational ParseRational(const std::string& text);
Rational Pow(const Rational& base, int exponent);

}  // namespace wpir

#endif  // WPIR_RATIONAL_H_
