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

#include "core/report.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "core/error.h"
#include "core/text.h"

namespace dvbp {

std::vector<Rational> SweepEpsilons(const Rational& from, const Rational& to,
                                    const Rational& step) {
  if (step <= Rational(0)) {
    throw Error(ErrorCode::kInvalidArgument, "sweep step must be positive");
  }
  if (from < Rational(0) || to < from) {
    throw Error(ErrorCode::kInvalidArgument,
                "sweep range must satisfy 0 <= from <= to");
  }
  std::vector<Rational> values;
  for (Rational eps = from; eps <= to; eps = eps + step) {
    values.push_back(eps);
  }
  return values;
}

unsigned DefaultThreadCount() {
  if (const char* env = std::getenv("DVBP_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepRow MakeSweepRow(const ReductionResult& result, double seconds) {
  const ReductionCertificate& c = result.certificate;
  const InstanceStats stats = ComputeStats(result.reduced);
  return SweepRow{
      .epsilon = c.epsilon,
      .lower_bound = c.lower_bound,
      .deletion_budget = c.deletion_budget,
      .horizon = stats.T,
      .height = stats.h,
      .n = stats.n,
      .tau = stats.tau,
      .upper_bound = c.metrics.upper_bound,
      .removed_utilization = c.metrics.removed_utilization,
      .remaining_utilization = c.metrics.remaining_utilization,
      .seconds = seconds,
  };
}

std::vector<SweepRow> RunSweep(const Instance& instance,
                               const SweepOptions& options) {
  const std::vector<Rational> epsilons =
      SweepEpsilons(options.from, options.to, options.step);
  std::vector<SweepRow> rows(epsilons.size());
  const unsigned threads = std::min<unsigned>(
      options.threads == 0 ? DefaultThreadCount() : options.threads,
      static_cast<unsigned>(std::max<size_t>(epsilons.size(), 1)));

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (size_t i = next++; i < epsilons.size(); i = next++) {
      try {
        const auto begin = std::chrono::steady_clock::now();
        ReductionResult result =
            Reduce(instance, epsilons[i], options.mode, options.reduction);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - begin;
        rows[i] = MakeSweepRow(result, options.timing ? elapsed.count() : 0);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string FormatUtilization(const std::optional<Rational>& value) {
  return value ? value->ToFixed(6) : "nan";
}

std::string SweepToCsv(const std::vector<SweepRow>& rows, bool timing) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepRow& r : rows) {
    char seconds[32];
    std::snprintf(seconds, sizeof(seconds), "%.3f", timing ? r.seconds : 0.0);
    out += r.epsilon.ToDecimalString() + "," + r.lower_bound.ToString() + "," +
           std::to_string(r.deletion_budget) + "," +
           std::to_string(r.horizon) + "," + std::to_string(r.height) + "," +
           std::to_string(r.n) + "," + std::to_string(r.tau) + "," +
           std::to_string(r.upper_bound) + "," +
           FormatUtilization(r.removed_utilization) + "," +
           FormatUtilization(r.remaining_utilization) + "," + seconds + "\n";
  }
  return out;
}

std::vector<SweepRow> ParseSweepCsv(std::string_view csv) {
  std::vector<SweepRow> rows;
  LineReader reader(csv);
  std::string_view line;
  bool header = false;
  auto optional_rational = [](std::string_view field)
      -> std::optional<Rational> {
    if (field == "nan") return std::nullopt;
    return Rational::Parse(field);
  };
  while (reader.Next(line)) {
    if (Trim(line).empty()) continue;
    if (!header) {
      if (Trim(line) != kSweepHeader) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(reader.line_number()) +
                        ": unexpected sweep header");
      }
      header = true;
      continue;
    }
    auto f = Split(line, ',');
    if (f.size() != 11) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(reader.line_number()) +
                      ": expected 11 sweep columns");
    }
    const size_t ln = reader.line_number();
    rows.push_back(SweepRow{
        .epsilon = Rational::Parse(f[0]),
        .lower_bound = Rational::Parse(f[1]),
        .deletion_budget = ParseInt64(f[2], ln),
        .horizon = ParseInt64(f[3], ln),
        .height = static_cast<size_t>(ParseInt64(f[4], ln)),
        .n = static_cast<size_t>(ParseInt64(f[5], ln)),
        .tau = static_cast<size_t>(ParseInt64(f[6], ln)),
        .upper_bound = ParseInt64(f[7], ln),
        .removed_utilization = optional_rational(f[8]),
        .remaining_utilization = optional_rational(f[9]),
        .seconds = std::strtod(std::string(f[10]).c_str(), nullptr),
    });
  }
  return rows;
}

std::string MetricsToCsv(const ReductionResult& result) {
  const ReductionCertificate& c = result.certificate;
  const InstanceStats stats = ComputeStats(result.reduced);
  std::string out(kMetricsHeader);
  const std::vector<std::string> fields = {
      c.epsilon.ToDecimalString(),
      c.lower_bound.ToString(),
      std::to_string(c.deletion_budget),
      std::to_string(c.metrics.n),
      std::to_string(c.metrics.n_prime),
      std::to_string(stats.T),
      std::to_string(stats.h),
      std::to_string(stats.tau),
      std::to_string(c.metrics.upper_bound),
      FormatUtilization(c.metrics.removed_utilization),
      FormatUtilization(c.metrics.remaining_utilization),
  };
  for (size_t i = 0; i < fields.size(); ++i) {
    out += (i == 0 ? "\n" : ",") + fields[i];
  }
  out += "\n";
  return out;
}

}  // namespace dvbp
