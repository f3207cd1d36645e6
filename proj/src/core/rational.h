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

#ifndef DVBP_CORE_RATIONAL_H_
#define DVBP_CORE_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dvbp {

// Exact fraction over 64-bit integers, always kept in lowest terms with a
// positive denominator. Intermediate products use 128-bit integers; results
// that do not fit back into 64 bits raise ErrorCode::kOverflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(int64_t numerator, int64_t denominator = 1);  // NOLINT

  // Accepts "3", "-2", "0.05", "1.5e-2" and "11/10".
  static Rational Parse(std::string_view text);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  int64_t Floor() const;
  int64_t Ceil() const;
  double ToDouble() const;
  bool IsInteger() const { return den_ == 1; }

  // "11/10", or "3" for integers.
  std::string ToString() const;
  // Terminating decimal expansion when one exists ("0.05"), else ToString().
  std::string ToDecimalString() const;
  // Rounded to `digits` places, half away from zero, computed exactly.
  std::string ToFixed(int digits) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  static Rational FromWide(__int128 numerator, __int128 denominator);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

// floor(a * b) without materializing the product as a Rational.
int64_t FloorOfProduct(const Rational& a, const Rational& b);

}  // namespace dvbp

#endif  // DVBP_CORE_RATIONAL_H_
