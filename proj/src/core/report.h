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

// Epsilon sweeps and the CSV reports shared by the CLI and the C API.

#ifndef DVBP_CORE_REPORT_H_
#define DVBP_CORE_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/model.h"
#include "core/packing.h"
#include "core/rational.h"
#include "core/reduction.h"

namespace dvbp {

struct SweepRow {
  Rational epsilon;
  Rational lower_bound;
  int64_t deletion_budget = 0;
  TimePoint horizon = 0;  // of the reduced instance
  size_t height = 0;
  size_t n = 0;
  size_t tau = 0;
  int64_t upper_bound = 0;
  std::optional<Rational> removed_utilization;
  std::optional<Rational> remaining_utilization;
  double seconds = 0;
};

struct SweepOptions {
  Rational from{0};
  Rational to{1, 5};
  Rational step{1, 100};
  PriorityMode mode = PriorityMode::kF2;
  ReductionOptions reduction;
  // 0 picks DVBP_THREADS or the hardware concurrency.
  unsigned threads = 0;
  // When false the seconds column is written as 0 so reruns are identical.
  bool timing = true;
};

std::vector<Rational> SweepEpsilons(const Rational& from, const Rational& to,
                                    const Rational& step);

// Each epsilon is reduced independently from `instance`; rows come back in
// epsilon order whatever the thread count.
std::vector<SweepRow> RunSweep(const Instance& instance,
                               const SweepOptions& options);

SweepRow MakeSweepRow(const ReductionResult& result, double seconds);

inline constexpr std::string_view kSweepHeader =
    "eps,L,k_del,T,h,n,tau,U,R,K,seconds";

std::string SweepToCsv(const std::vector<SweepRow>& rows, bool timing = true);
std::vector<SweepRow> ParseSweepCsv(std::string_view csv);

// Single-row summary written by `reduce`.
inline constexpr std::string_view kMetricsHeader =
    "eps,L,k_del,n,n_prime,T_prime,h_prime,tau_prime,U,R,K";
std::string MetricsToCsv(const ReductionResult& result);

// "nan" for undefined values, otherwise six decimals.
std::string FormatUtilization(const std::optional<Rational>& value);

unsigned DefaultThreadCount();

}  // namespace dvbp

#endif  // DVBP_CORE_REPORT_H_
