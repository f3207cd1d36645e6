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

#include "core/reduction.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "core/bounds.h"
#include "core/error.h"
#include "core/exact.h"
#include "core/instance_io.h"
#include "core/timeline.h"
#include "testing.h"

namespace dvbp {
namespace {

using testing::Make;

Instance FourUnitRequests() {
  return Make({1}, {{{1}, 1, 3}, {{1}, 1, 3}, {{1}, 1, 3}, {{1}, 1, 3}});
}

TEST(ReduceTest, FourUnitRequestsHandExample) {
  ReductionResult r =
      Reduce(FourUnitRequests(), Rational(1, 4), PriorityMode::kF2);
  const ReductionCertificate& c = r.certificate;
  EXPECT_EQ(c.lower_bound, Rational(4));
  EXPECT_EQ(c.deletion_budget, 1);
  ASSERT_EQ(c.deletion_bins.size(), 1u);
  EXPECT_EQ(c.deletion_bins[0].size(), 1u);
  EXPECT_EQ(r.reduced.size(), 3u);
  EXPECT_EQ(c.metrics.n_prime, 3);
  EXPECT_EQ(c.metrics.upper_bound, 1);
  EXPECT_EQ(c.metrics.removed_utilization, Rational(1));
  EXPECT_EQ(c.metrics.remaining_utilization, Rational(1));
}

TEST(ReduceTest, ZeroEpsilonOnlyCompresses) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    Instance instance = testing::RandomInstance(rng, {.max_n = 15});
    ReductionResult r = Reduce(instance, Rational(0), PriorityMode::kF2);
    EXPECT_EQ(r.reduced, CompressTime(instance).instance);
    EXPECT_TRUE(r.certificate.deletion_bins.empty());
    EXPECT_EQ(r.certificate.deletion_budget, 0);
  }
}

TEST(ReduceTest, NegativeEpsilonRejected) {
  EXPECT_THROW(Reduce(FourUnitRequests(), Rational(-1, 10), PriorityMode::kF2),
               Error);
}

TEST(ReduceTest, DeletionBinsAreFeasibleAndDisjointFromSurvivors) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    Instance instance =
        testing::RandomInstance(rng, {.max_n = 20, .max_d = 3});
    for (auto mode :
         {PriorityMode::kAlpha, PriorityMode::kF1, PriorityMode::kF2}) {
      ReductionResult r = Reduce(instance, Rational(1, 2), mode);
      const ReductionCertificate& c = r.certificate;
      EXPECT_LE(static_cast<int64_t>(c.deletion_bins.size()),
                c.deletion_budget);
      std::set<RequestId> seen;
      for (const auto& bin : c.deletion_bins) {
        EXPECT_FALSE(bin.empty());
        std::vector<size_t> indices;
        for (RequestId id : bin) {
          EXPECT_TRUE(seen.insert(id).second);
          indices.push_back(*instance.IndexOf(id));
        }
        EXPECT_TRUE(testing::OracleFitsOneBin(instance, indices));
      }
      for (RequestId id : c.surviving_ids) {
        EXPECT_TRUE(seen.insert(id).second);
      }
      EXPECT_EQ(seen.size(), instance.size());
      EXPECT_EQ(r.reduced.size(), c.surviving_ids.size());
      EXPECT_EQ(c.metrics.n, static_cast<int64_t>(instance.size()));
      EXPECT_EQ(c.metrics.n_prime, static_cast<int64_t>(r.reduced.size()));
      EXPECT_EQ(c.reduced_instance_ref, Fingerprint(r.reduced));
    }
  }
}

TEST(ReduceTest, BudgetUsesLowerBoundOfInput) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    Instance instance = testing::RandomInstance(rng, {.max_n = 20});
    const Rational eps(1, 3);
    ReductionResult r = Reduce(instance, eps, PriorityMode::kF2);
    EXPECT_EQ(r.certificate.lower_bound, testing::OracleLowerBound(instance));
    EXPECT_EQ(r.certificate.deletion_budget,
              (eps * testing::OracleLowerBound(instance)).Floor());
  }
}

TEST(ReduceTest, Deterministic) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    Instance instance = testing::RandomInstance(rng, {.max_n = 20});
    ReductionResult a = Reduce(instance, Rational(1, 2), PriorityMode::kF1);
    ReductionResult b = Reduce(instance, Rational(1, 2), PriorityMode::kF1);
    EXPECT_EQ(a.reduced, b.reduced);
    EXPECT_EQ(CertificateToJson(a.certificate),
              CertificateToJson(b.certificate));
  }
}

TEST(ReduceTest, RecompressOptionGivesCompressedOutputEitherWay) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    Instance instance = testing::RandomInstance(rng, {.max_n = 20});
    ReductionOptions options;
    options.recompress = false;
    ReductionResult r =
        Reduce(instance, Rational(1, 2), PriorityMode::kF2, options);
    EXPECT_EQ(CompressTime(r.reduced).instance, r.reduced);
    EXPECT_FALSE(r.certificate.recompress);
  }
}

TEST(LiftTest, FourUnitRequests) {
  Instance original = FourUnitRequests();
  ReductionResult r = Reduce(original, Rational(1, 4), PriorityMode::kF2);
  ExactSolution opt = BruteForceOpt(r.reduced);
  EXPECT_EQ(opt.bins, 3);
  Packing lifted = LiftSolution(r.certificate, opt.packing, original);
  EXPECT_EQ(lifted.bins, 4);
  EXPECT_TRUE(VerifyPacking(original, lifted).feasible);
}

TEST(LiftTest, EmptyCertificateIsIdentity) {
  Instance original = testing::ThreeRequestExample();
  ReductionResult r = Reduce(original, Rational(0), PriorityMode::kF2);
  Packing p{{{1, 1}, {2, 2}, {3, 1}}, 2, false};
  EXPECT_EQ(LiftSolution(r.certificate, p, original), p);
}

TEST(LiftTest, GuaranteeOnRandomInstances) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 80; ++trial) {
    Instance original =
        testing::RandomInstance(rng, {.max_n = 8, .max_d = 2, .max_time = 6});
    const int opt = testing::OracleOpt(original);
    for (Rational eps : {Rational(1, 4), Rational(1, 2), Rational(1)}) {
      ReductionResult r = Reduce(original, eps, PriorityMode::kF2);
      const int reduced_opt = testing::OracleOpt(r.reduced);
      EXPECT_LE(reduced_opt, opt);
      Packing lifted = LiftSolution(r.certificate,
                                    BruteForceOpt(r.reduced).packing, original);
      EXPECT_TRUE(VerifyPacking(original, lifted).feasible);
      EXPECT_LE(lifted.bins, opt + r.certificate.deletion_budget);
    }
  }
}

TEST(LiftTest, RejectsForeignPackings) {
  Instance original = FourUnitRequests();
  ReductionResult r = Reduce(original, Rational(1, 4), PriorityMode::kF2);
  const RequestId deleted = r.certificate.deletion_bins[0][0];
  Packing bogus{{{deleted, 1}}, 1, false};
  EXPECT_THROW(LiftSolution(r.certificate, bogus, original), Error);
  Packing partial = BruteForceOpt(r.reduced).packing;
  partial.partial = true;
  EXPECT_THROW(LiftSolution(r.certificate, partial, original), Error);
  EXPECT_THROW(LiftSolution(r.certificate, BruteForceOpt(r.reduced).packing,
                            testing::ThreeRequestExample()),
               Error);
}

TEST(LiftTest, RejectsInfeasibleReducedPacking) {
  Instance original = FourUnitRequests();
  ReductionResult r = Reduce(original, Rational(1, 4), PriorityMode::kF2);
  Packing crowded;
  crowded.bins = 1;
  for (RequestId id : r.certificate.surviving_ids) {
    crowded.assignment.push_back({id, 1});
  }
  EXPECT_THROW(LiftSolution(r.certificate, crowded, original), Error);
}

TEST(CertificateTest, JsonRoundTrip) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 100; ++trial) {
    Instance instance = testing::RandomInstance(rng, {.max_n = 20});
    ReductionResult r = Reduce(instance, Rational(1, 2), PriorityMode::kAlpha);
    const std::string json = CertificateToJson(r.certificate);
    ReductionCertificate back = ParseCertificate(json);
    EXPECT_EQ(back, r.certificate);
    EXPECT_EQ(CertificateToJson(back), json);
  }
}

TEST(CertificateTest, RejectsMalformedJson) {
  EXPECT_THROW(ParseCertificate("{"), Error);
  EXPECT_THROW(ParseCertificate("{}"), Error);
}

TEST(CertificateTest, VariantNames) {
  EXPECT_EQ(ParseUpperBoundVariant("scaled"), UpperBoundVariant::kScaled);
  EXPECT_EQ(UpperBoundVariantName(UpperBoundVariant::kAsWritten),
            "as-written");
  EXPECT_THROW(ParseUpperBoundVariant("other"), Error);
}

}  // namespace
}  // namespace dvbp
