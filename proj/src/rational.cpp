// Copyright 2026 The arclaw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arclaw/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "arclaw/errors.hpp"

namespace arclaw {
namespace {

using Wide = __int128;

constexpr std::int64_t kMax64 = std::numeric_limits<std::int64_t>::max();

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

[[noreturn]] void bad_literal(std::string_view text, const char* why) {
  throw Error(ErrorCode::kInvalidArgument,
              "cannot parse number '" + std::string(text) + "': " + why);
}

// Decimal literal with optional fraction and exponent, parsed exactly.
Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  Wide mantissa = 0;
  int scale = 0;  // value = mantissa * 10^scale
  bool any_digit = false;
  bool seen_point = false;
  constexpr Wide kLimit = static_cast<Wide>(1) << 100;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      any_digit = true;
      mantissa = mantissa * 10 + (ch - '0');
      if (mantissa > kLimit) bad_literal(text, "too many digits");
      if (seen_point) --scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad_literal(text, "no digits");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    int exponent = 0;
    bool exp_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]));
         ++i) {
      exp_digit = true;
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 40) bad_literal(text, "exponent out of range");
    }
    if (!exp_digit) bad_literal(text, "empty exponent");
    scale += exp_negative ? -exponent : exponent;
  }
  if (i != text.size()) bad_literal(text, "trailing characters");
  if (scale > 36 || scale < -36) bad_literal(text, "exponent out of range");

  Wide num = negative ? -mantissa : mantissa;
  Wide den = 1;
  for (; scale > 0; --scale) {
    num *= 10;
    if (wide_abs(num) > kLimit) bad_literal(text, "value out of range");
  }
  for (; scale < 0; ++scale) den *= 10;
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (wide_abs(num) > kMax64 || den > kMax64) {
    bad_literal(text, "not representable with 64-bit terms");
  }
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(Wide num, Wide den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (wide_abs(num) > kMax64 || den > kMax64) {
    throw Error(ErrorCode::kInvalidArgument,
                "rational arithmetic overflowed 64-bit terms");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) bad_literal(text, "empty");
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) return parse_decimal(body);
  const Rational p = parse_decimal(trim(body.substr(0, slash)));
  const Rational q = parse_decimal(trim(body.substr(slash + 1)));
  if (q.is_zero()) bad_literal(text, "zero denominator");
  return p / q;
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite value");
  }
  if (x == 0.0) return Rational();
  int exponent = 0;
  const double fraction = std::frexp(x, &exponent);
  auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
  int shift = exponent - 53;
  while (shift < 0 && (mantissa % 2) == 0) {
    mantissa /= 2;
    ++shift;
  }
  if (shift >= 0) {
    if (shift > 62) throw Error(ErrorCode::kInvalidArgument, "double too large");
    return from_wide(static_cast<Wide>(mantissa) << shift, 1);
  }
  if (-shift > 62) {
    throw Error(ErrorCode::kInvalidArgument,
                "double has no 64-bit rational representation");
  }
  return from_wide(mantissa, static_cast<Wide>(1) << (-shift));
}

double Rational::to_double() const {
  constexpr std::int64_t kExact = std::int64_t{1} << 53;
  if (num_ <= kExact && num_ >= -kExact && den_ <= kExact) {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  return static_cast<double>(static_cast<long double>(num_) /
                             static_cast<long double>(den_));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(
      static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
      static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(
      static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
      static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<Wide>(a.num_) * b.num_,
                             static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::kInvalidArgument, "division by zero");
  return Rational::from_wide(static_cast<Wide>(a.num_) * b.den_,
                             static_cast<Wide>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kStructureMismatch: return "StructureMismatch";
    case ErrorCode::kCoreNotInvariant: return "CoreNotInvariant";
    case ErrorCode::kDegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::kOutsideCore: return "OutsideCore";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kZeroSideMass: return "ZeroSideMass";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kMixedVariant: return "MixedVariant";
    case ErrorCode::kTruncationEscape: return "TruncationEscape";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace arclaw
