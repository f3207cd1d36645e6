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

#include <gtest/gtest.h>

#include <random>

#include "core/error.h"

namespace dvbp {
namespace {

TEST(RationalTest, NormalizesSignAndGcd) {
  Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, 7), Rational(0));
  EXPECT_THROW(Rational(1, 0), Error);
}

TEST(RationalTest, ParsesDecimalsExactly) {
  EXPECT_EQ(Rational::Parse("0.05"), Rational(1, 20));
  EXPECT_EQ(Rational::Parse("1.5e-2"), Rational(3, 200));
  EXPECT_EQ(Rational::Parse("11/10"), Rational(11, 10));
  EXPECT_EQ(Rational::Parse("-2"), Rational(-2));
  EXPECT_EQ(Rational::Parse("0.2"), Rational(1, 5));
  EXPECT_THROW(Rational::Parse(""), Error);
  EXPECT_THROW(Rational::Parse("abc"), Error);
  EXPECT_THROW(Rational::Parse("1/0"), Error);
}

TEST(RationalTest, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).Floor(), 3);
  EXPECT_EQ(Rational(7, 2).Ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).Floor(), -4);
  EXPECT_EQ(Rational(-7, 2).Ceil(), -3);
  EXPECT_EQ(Rational(4).Floor(), 4);
}

TEST(RationalTest, Formatting) {
  EXPECT_EQ(Rational(11, 10).ToString(), "11/10");
  EXPECT_EQ(Rational(3).ToString(), "3");
  EXPECT_EQ(Rational(1, 20).ToDecimalString(), "0.05");
  EXPECT_EQ(Rational(1, 3).ToDecimalString(), "1/3");
  EXPECT_EQ(Rational(3, 4).ToFixed(6), "0.750000");
  EXPECT_EQ(Rational(2, 3).ToFixed(3), "0.667");
  EXPECT_EQ(Rational(-1, 8).ToFixed(2), "-0.13");
  EXPECT_EQ(Rational(5).ToFixed(0), "5");
}

TEST(RationalTest, FloorOfProductMatchesDecimalEpsilon) {
  // eps = 0.05, L = 814 -> 40 bins.
  EXPECT_EQ(FloorOfProduct(Rational::Parse("0.05"), Rational(814)), 40);
  EXPECT_EQ(FloorOfProduct(Rational::Parse("0.05"), Rational(116864)), 5843);
  EXPECT_EQ(FloorOfProduct(Rational(1, 4), Rational(4)), 1);
  EXPECT_EQ(FloorOfProduct(Rational(0), Rational(11, 10)), 0);
}

TEST(RationalTest, ArithmeticAgreesWithCrossMultiplication) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> dist(-1000, 1000);
  for (int trial = 0; trial < 2000; ++trial) {
    int64_t a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng);
    if (b == 0 || d == 0) continue;
    Rational x(a, b), y(c, d);
    EXPECT_EQ(x + y, Rational(a * d + c * b, b * d));
    EXPECT_EQ(x - y, Rational(a * d - c * b, b * d));
    EXPECT_EQ(x * y, Rational(a * c, b * d));
    if (c != 0) EXPECT_EQ(x / y, Rational(a * d, b * c));
    const int64_t lhs = a * d * (b * d > 0 ? 1 : -1);
    const int64_t rhs = c * b * (b * d > 0 ? 1 : -1);
    EXPECT_EQ(x < y, lhs < rhs);
    EXPECT_EQ(x == y, lhs == rhs);
  }
}

TEST(RationalTest, ComparesLargeValuesWithoutOverflow) {
  const int64_t big = int64_t{1} << 62;
  EXPECT_LT(Rational(big - 1, big), Rational(big, big - 1));
  EXPECT_GT(Rational(big, 3), Rational(big - 1, 3));
}

}  // namespace
}  // namespace dvbp
