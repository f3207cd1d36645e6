// Copyright 2026 The dvbp Authors
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

#include "core/rational.h"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <string>

#include "core/error.h"

namespace dvbp {
namespace {

using Wide = __int128;

Wide WideGcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

bool FitsInt64(Wide v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

// Floor division for a positive divisor.
Wide FloorDiv(Wide a, Wide b) {
  Wide q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

std::string WideToString(Wide v) {
  if (v == 0) return "0";
  bool negative = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    out.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (negative) out.push_back('-');
  return std::string(out.rbegin(), out.rend());
}

Rational ParseInteger(std::string_view text) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse,
                "invalid rational literal '" + std::string(text) + "'");
  }
  return Rational(value);
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kRefused:
      return "refused";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kOverflow:
      return "arithmetic overflow";
    case ErrorCode::kInternal:
      return "internal error";
  }
  return "unknown error";
}

Rational::Rational(int64_t numerator, int64_t denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::kInvalidArgument, "rational with zero denominator");
  }
  *this = FromWide(numerator, denominator);
}

Rational Rational::FromWide(Wide numerator, Wide denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::kInvalidArgument, "rational with zero denominator");
  }
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  Wide g = WideGcd(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  if (!FitsInt64(numerator) || !FitsInt64(denominator)) {
    throw Error(ErrorCode::kOverflow, "rational value exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<int64_t>(numerator);
  r.den_ = static_cast<int64_t>(denominator);
  return r;
}

Rational Rational::Parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw Error(ErrorCode::kParse, "empty rational literal");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational n = ParseInteger(text.substr(0, slash));
    Rational d = ParseInteger(text.substr(slash + 1));
    if (d.num() == 0) {
      throw Error(ErrorCode::kParse,
                  "zero denominator in '" + std::string(text) + "'");
    }
    return FromWide(n.num(), d.num());
  }

  const std::string original(text);
  auto fail = [&original]() -> Rational {
    throw Error(ErrorCode::kParse,
                "invalid rational literal '" + original + "'");
  };
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Wide mantissa = 0;
  int exponent = 0;
  int digits = 0;
  bool seen_point = false;
  size_t i = 0;
  constexpr Wide kMantissaLimit = static_cast<Wide>(1) << 120;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') break;
    ++digits;
    if (mantissa > kMantissaLimit / 10) return fail();
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) --exponent;
  }
  if (digits == 0) return fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    int exp_value = 0;
    std::string_view rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] =
        std::from_chars(rest.data(), rest.data() + rest.size(), exp_value);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) {
      return fail();
    }
    exponent += exp_value;
  }
  if (exponent > 36 || exponent < -36) {
    throw Error(ErrorCode::kOverflow,
                "exponent out of range in '" + original + "'");
  }
  Wide num = negative ? -mantissa : mantissa;
  Wide den = 1;
  for (; exponent > 0; --exponent) {
    if (num > kMantissaLimit || num < -kMantissaLimit) {
      throw Error(ErrorCode::kOverflow, "value out of range: " + original);
    }
    num *= 10;
  }
  for (; exponent < 0; ++exponent) {
    den *= 10;
    Wide g = WideGcd(num, den);
    num /= g;
    den /= g;
  }
  return FromWide(num, den);
}

int64_t Rational::Floor() const {
  return static_cast<int64_t>(FloorDiv(num_, den_));
}

int64_t Rational::Ceil() const {
  return static_cast<int64_t>(-FloorDiv(-static_cast<Wide>(num_), den_));
}

double Rational::ToDouble() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::ToDecimalString() const {
  if (den_ == 1) return std::to_string(num_);
  int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  int places = twos > fives ? twos : fives;
  if (d != 1 || places > 18) return ToString();
  return ToFixed(places);
}

std::string Rational::ToFixed(int digits) const {
  if (digits < 0 || digits > 18) {
    throw Error(ErrorCode::kInvalidArgument, "ToFixed supports 0..18 digits");
  }
  Wide scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Wide magnitude = num_ < 0 ? -static_cast<Wide>(num_) : num_;
  // Round half away from zero.
  Wide scaled = (magnitude * scale * 2 + den_) / (static_cast<Wide>(den_) * 2);
  std::string integral = WideToString(scaled / scale);
  std::string out = (num_ < 0 && scaled != 0) ? "-" + integral : integral;
  if (digits > 0) {
    std::string frac = WideToString(scaled % scale);
    out += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return out;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<Wide>(a.num_) * b.den_ +
                                static_cast<Wide>(b.num_) * a.den_,
                            static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<Wide>(a.num_) * b.den_ -
                                static_cast<Wide>(b.num_) * a.den_,
                            static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<Wide>(a.num_) * b.num_,
                            static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "division by zero rational");
  }
  return Rational::FromWide(static_cast<Wide>(a.num_) * b.den_,
                            static_cast<Wide>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int64_t FloorOfProduct(const Rational& a, const Rational& b) {
  Wide num = static_cast<Wide>(a.num()) * b.num();
  Wide den = static_cast<Wide>(a.den()) * b.den();
  Wide q = FloorDiv(num, den);
  if (!FitsInt64(q)) {
    throw Error(ErrorCode::kOverflow, "floor of product exceeds 64-bit range");
  }
  return static_cast<int64_t>(q);
}

}  // namespace dvbp
