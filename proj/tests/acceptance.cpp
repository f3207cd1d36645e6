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

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero when any criterion fails. Trace-based criteria run only when the
// trace paths are given through DVBP_HUAWEI_TRACE and DVBP_AZURE_TRACE;
// the ILP criterion runs only when python3 with highspy is available.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/bounds.h"
#include "core/error.h"
#include "core/exact.h"
#include "core/ingest.h"
#include "core/model.h"
#include "core/packing.h"
#include "core/reduction.h"
#include "core/text.h"
#include "core/timeline.h"
#include "testing.h"

namespace dvbp {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned limits and tolerances.
constexpr double kGuaranteeSeconds = 60;
constexpr double kCompressionSeconds = 30;
constexpr double kSolverSeconds = 120;
constexpr double kHuaweiSeconds = 120;
constexpr double kAzureSeconds = 600;
constexpr double kRelativeTolerance = 0.05;
constexpr TimePoint kHorizonTolerance = 1;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

Outcome Pass(std::string detail) { return {Verdict::kPass, std::move(detail)}; }
Outcome Fail(std::string detail) { return {Verdict::kFail, std::move(detail)}; }
Outcome Skip(std::string detail) { return {Verdict::kSkip, std::move(detail)}; }

// Collects the first few failures of a randomized criterion.
class Failures {
 public:
  void Add(const std::string& message) {
    if (count_++ < 5) text_ += (text_.empty() ? "" : "; ") + message;
  }
  bool empty() const { return count_ == 0; }
  std::string Summary() const {
    return std::to_string(count_) + " failure(s): " + text_;
  }

 private:
  size_t count_ = 0;
  std::string text_;
};

std::string Str(const Rational& r) { return r.ToString(); }

bool WithinRelative(double value, double target, double tolerance) {
  return value >= target * (1 - tolerance) && value <= target * (1 + tolerance);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Outcome TimeLimited(Outcome outcome, double seconds, double limit) {
  outcome.detail += ", " + std::to_string(seconds).substr(0, 5) + "s";
  if (outcome.verdict == Verdict::kPass && seconds > limit) {
    outcome.verdict = Verdict::kFail;
    outcome.detail += " exceeds " + std::to_string(static_cast<int>(limit)) +
                      "s limit";
  }
  return outcome;
}

// Instances with enough overlap that floor(eps * L) is often positive.
Instance GuaranteeInstance(std::mt19937_64& rng) {
  auto uniform = [&](int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
  };
  const size_t n = static_cast<size_t>(uniform(1, 12));
  const size_t d = static_cast<size_t>(uniform(1, 3));
  std::vector<int64_t> capacity(d);
  for (int64_t& c : capacity) c = uniform(1, 8);
  const TimePoint horizon = uniform(2, 6);
  std::vector<testing::Spec> specs;
  for (size_t i = 0; i < n; ++i) {
    testing::Spec s;
    for (size_t j = 0; j < d; ++j) {
      s.demand.push_back(uniform(capacity[j] / 2, capacity[j]));
    }
    s.start = uniform(0, horizon - 1);
    s.end = uniform(s.start + 1, horizon);
    specs.push_back(std::move(s));
  }
  return testing::Make(std::move(capacity), specs);
}

Outcome Criterion1() {
  const auto begin = Clock::now();
  std::mt19937_64 rng(1001);
  const std::vector<Rational> epsilons = {Rational(1, 10), Rational(1, 4),
                                          Rational(1, 2)};
  Failures failures;
  size_t instances = 0, runs = 0, with_deletions = 0;
  for (; instances < 240; ++instances) {
    Instance instance = GuaranteeInstance(rng);
    const ExactSolution opt = BruteForceOpt(instance);
    for (const Rational& eps : epsilons) {
      ++runs;
      ReductionResult r = Reduce(instance, eps, PriorityMode::kF2);
      const int64_t k_del = r.certificate.deletion_budget;
      if (!r.certificate.deletion_bins.empty()) ++with_deletions;
      const ExactSolution reduced_opt = BruteForceOpt(r.reduced);
      if (reduced_opt.bins > opt.bins) {
        failures.Add("OPT(I')=" + std::to_string(reduced_opt.bins) +
                     " > OPT(I)=" + std::to_string(opt.bins));
      }
      Packing lifted =
          LiftSolution(r.certificate, reduced_opt.packing, instance);
      if (!VerifyPacking(instance, lifted).feasible) {
        failures.Add("lifted packing infeasible");
      }
      if (lifted.bins > opt.bins + k_del) {
        failures.Add("lift uses " + std::to_string(lifted.bins) + " > " +
                     std::to_string(opt.bins) + "+" + std::to_string(k_del));
      }
    }
  }
  Outcome out = failures.empty()
                    ? Pass(std::to_string(instances) + " instances, " +
                           std::to_string(runs) + " reductions, " +
                           std::to_string(with_deletions) +
                           " with deleted bins")
                    : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kGuaranteeSeconds);
}

Outcome Criterion2() {
  const auto begin = Clock::now();
  std::mt19937_64 rng(1002);
  Failures failures;
  for (int trial = 0; trial < 500; ++trial) {
    Instance instance = testing::RandomInstance(
        rng, {.max_n = 40, .max_d = 2, .max_time = 60});
    Instance compressed = CompressTime(instance).instance;
    if (ComputeIntersectionMatrix(instance) !=
        ComputeIntersectionMatrix(compressed)) {
      failures.Add("intersection matrix changed (trial " +
                   std::to_string(trial) + ")");
    }
    for (size_t i = 0; i < instance.size(); ++i) {
      for (size_t j = i + 1; j < instance.size(); ++j) {
        if (testing::OracleIntersects(instance.request(i),
                                      instance.request(j)) !=
            testing::OracleIntersects(compressed.request(i),
                                      compressed.request(j))) {
          failures.Add("pair " + std::to_string(i) + "," + std::to_string(j));
        }
      }
    }
    if (CompressTime(compressed).instance != compressed) {
      failures.Add("not idempotent (trial " + std::to_string(trial) + ")");
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    Instance instance = testing::RandomInstance(
        rng, {.min_n = 1, .max_n = 6, .max_d = 1, .max_time = 14});
    const TimePoint got = CompressTime(instance).map.horizon();
    const TimePoint best = testing::OracleMinHorizon(instance);
    if (got != best) {
      failures.Add("T'=" + std::to_string(got) + " but minimum is " +
                   std::to_string(best));
    }
  }
  Outcome out = failures.empty()
                    ? Pass("500 matrix/idempotence cases, 200 minimality cases")
                    : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kCompressionSeconds);
}

Outcome Criterion3() {
  const auto begin = Clock::now();
  std::mt19937_64 rng(1003);
  Failures failures;
  size_t checks = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Instance instance = testing::RandomInstance(
        rng, {.max_n = 8, .max_d = 2, .max_time = 8});
    const ExactSolution opt = BruteForceOpt(instance);
    if (!VerifyPacking(instance, opt.packing).feasible) {
      failures.Add("brute-force witness infeasible");
    }
    for (int64_t k = 0; k <= 3; ++k) {
      ++checks;
      DpResult r = DpFeasible(instance, k);
      if (r.feasible != (opt.bins <= k)) {
        failures.Add("dp(k=" + std::to_string(k) + ")=" +
                     std::to_string(r.feasible) + " but OPT=" +
                     std::to_string(opt.bins));
      }
      if (r.feasible &&
          (!r.witness || !VerifyPacking(instance, *r.witness).feasible)) {
        failures.Add("dp witness missing or infeasible");
      }
    }
    ExactSolution dp_opt = DpMinimumBins(instance, {.max_height = 10,
                                                    .max_bins = 8});
    if (dp_opt.bins != opt.bins ||
        !VerifyPacking(instance, dp_opt.packing).feasible) {
      failures.Add("dp minimum disagrees");
    }
  }
  Outcome out = failures.empty()
                    ? Pass("300 instances, " + std::to_string(checks) +
                           " (instance, k) decisions")
                    : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kSolverSeconds);
}

Outcome Criterion4() {
  const auto begin = Clock::now();
  std::mt19937_64 rng(1004);
  Failures failures;
  for (int trial = 0; trial < 500; ++trial) {
    Instance instance = testing::RandomInstance(
        rng, {.max_n = 16, .max_d = 3, .max_time = 12});
    std::vector<RequestId> candidates;
    for (const Request& r : instance.requests()) {
      if (rng() % 5 != 0) candidates.push_back(r.id);
    }
    for (auto mode :
         {PriorityMode::kAlpha, PriorityMode::kF1, PriorityMode::kF2}) {
      std::vector<RequestId> packed = GreedyPackBin(instance, candidates, mode);
      std::vector<size_t> chosen;
      for (RequestId id : packed) chosen.push_back(*instance.IndexOf(id));
      if (!testing::OracleFitsOneBin(instance, chosen)) {
        failures.Add("greedy bin overloaded");
      }
      for (RequestId id : candidates) {
        if (std::find(packed.begin(), packed.end(), id) != packed.end()) {
          continue;
        }
        std::vector<size_t> more = chosen;
        more.push_back(*instance.IndexOf(id));
        if (testing::OracleFitsOneBin(instance, more)) {
          failures.Add("greedy bin not maximal");
        }
      }
      Packing p = HeuristicSolve(instance, mode);
      const int64_t lower = LowerBound(instance).Ceil();
      if (!VerifyPacking(instance, p).feasible || p.bins < lower ||
          p.bins > static_cast<int64_t>(instance.size())) {
        failures.Add("heuristic bins " + std::to_string(p.bins) +
                     " outside [" + std::to_string(lower) + ", n]");
      }
    }
  }
  Outcome out = failures.empty() ? Pass("500 instances x 3 modes")
                                 : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kSolverSeconds);
}

Outcome Criterion5() {
  const auto begin = Clock::now();
  std::mt19937_64 rng(1005);
  Failures failures;
  size_t defined_r = 0, defined_k = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Instance instance = testing::RandomCommonPointInstance(rng, 12, 3, 8);
    const int64_t n = static_cast<int64_t>(instance.size());
    const int64_t u1 =
        UpperBoundRemovable(instance, 1, UpperBoundVariant::kAsWritten);
    const size_t best = testing::OracleMaxOneBin(instance);
    if (u1 < static_cast<int64_t>(best)) {
      failures.Add("U(1)=" + std::to_string(u1) + " < " +
                   std::to_string(best));
    }
    int64_t previous = 0;
    for (int64_t k = 0; k <= 6; ++k) {
      const int64_t u =
          UpperBoundRemovable(instance, k, UpperBoundVariant::kAsWritten);
      if (u < previous) failures.Add("U decreased at k=" + std::to_string(k));
      previous = u;
    }
    const Rational lower = LowerBound(instance);
    if (lower == Rational(0)) continue;
    // eps = 1/L gives a single deletion bin.
    ReductionResult r =
        Reduce(instance, Rational(1) / lower, PriorityMode::kF2);
    const Metrics& m = r.certificate.metrics;
    if (r.certificate.deletion_budget != 1) {
      failures.Add("expected k_del=1, got " +
                   std::to_string(r.certificate.deletion_budget));
    }
    if (m.removed_utilization) {
      ++defined_r;
      if (*m.removed_utilization > Rational(1)) {
        failures.Add("R=" + Str(*m.removed_utilization) + " > 1");
      }
    }
    if (m.remaining_utilization) {
      ++defined_k;
      if (*m.remaining_utilization < Rational(1)) {
        failures.Add("K=" + Str(*m.remaining_utilization) + " < 1");
      }
    }
    if (m.n != n) failures.Add("metrics n mismatch");
  }
  Outcome out = failures.empty()
                    ? Pass("300 instances; R defined " +
                           std::to_string(defined_r) + "x, K defined " +
                           std::to_string(defined_k) + "x")
                    : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kSolverSeconds);
}

std::optional<std::string> EnvPath(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

std::string PresetPath(const std::string& name) {
  return std::string(DVBP_SOURCE_DIR) + "/presets/" + name + ".json";
}

Instance IngestFile(const std::string& trace, const std::string& preset) {
  std::ifstream input(trace, std::ios::binary);
  if (!input) throw Error(ErrorCode::kIo, "cannot open " + trace);
  return IngestTrace(input, LoadTraceSchema(PresetPath(preset))).instance;
}

// Criteria 6 and 8 share one ingestion of the Huawei trace.
std::optional<Instance>& HuaweiInstance() {
  static std::optional<Instance> instance;
  return instance;
}

Outcome Criterion6() {
  const auto trace = EnvPath("DVBP_HUAWEI_TRACE");
  if (!trace) return Skip("DVBP_HUAWEI_TRACE not set");
  const auto begin = Clock::now();
  HuaweiInstance() = IngestFile(*trace, "huawei");
  const Instance& instance = *HuaweiInstance();
  std::vector<std::string> problems;
  std::ostringstream seen;

  const InstanceStats raw = ComputeStats(instance);
  seen << "n=" << raw.n << " tau=" << raw.tau;
  if (raw.n != 125430) problems.push_back("n != 125430");
  if (raw.tau != 111050) problems.push_back("tau != 111050");

  const CompressedInstance compressed = CompressTime(instance);
  const InstanceStats after = ComputeStats(compressed.instance);
  seen << " compressed tau=" << after.tau << " T=" << after.T;
  if (after.tau != 78010) problems.push_back("compressed tau != 78010");
  if (std::llabs(after.T - 29347) > kHorizonTolerance) {
    problems.push_back("compressed T outside 29347+-1");
  }

  ReductionResult r = Reduce(instance, Rational(1, 20), PriorityMode::kF2);
  const Metrics& m = r.certificate.metrics;
  const size_t tau_prime = GroupTypes(r.reduced).entries.size();
  seen << " k_del=" << r.certificate.deletion_budget << " n'=" << m.n_prime
       << " tau'=" << tau_prime << " R="
       << (m.removed_utilization ? m.removed_utilization->ToFixed(3) : "nan")
       << " K="
       << (m.remaining_utilization ? m.remaining_utilization->ToFixed(3)
                                   : "nan");
  if (r.certificate.deletion_budget != 40) problems.push_back("k_del != 40");
  if (!WithinRelative(static_cast<double>(m.n_prime), 10079,
                      kRelativeTolerance)) {
    problems.push_back("n' outside 10079 +-5%");
  }
  if (!WithinRelative(static_cast<double>(tau_prime), 1798,
                      kRelativeTolerance)) {
    problems.push_back("tau' outside 1798 +-5%");
  }
  if (!m.removed_utilization ||
      *m.removed_utilization < Rational::Parse("0.94")) {
    problems.push_back("R < 0.94");
  }
  if (!m.remaining_utilization ||
      *m.remaining_utilization < Rational::Parse("1.3") ||
      *m.remaining_utilization > Rational::Parse("1.9")) {
    problems.push_back("K outside [1.3, 1.9]");
  }
  std::string detail = seen.str();
  for (const std::string& p : problems) detail += "; " + p;
  return TimeLimited(problems.empty() ? Pass(detail) : Fail(detail),
                     Seconds(begin), kHuaweiSeconds);
}

Outcome Criterion7() {
  const auto trace = EnvPath("DVBP_AZURE_TRACE");
  if (!trace) return Skip("DVBP_AZURE_TRACE not set");
  const auto begin = Clock::now();
  const Instance instance = IngestFile(*trace, "azure");
  std::vector<std::string> problems;
  std::ostringstream seen;
  ReductionResult r = Reduce(instance, Rational(1, 20), PriorityMode::kF2);
  const Metrics& m = r.certificate.metrics;
  const size_t tau_prime = GroupTypes(r.reduced).entries.size();
  seen << "n=" << instance.size() << " L=" << Str(r.certificate.lower_bound)
       << " k_del=" << r.certificate.deletion_budget << " n'=" << m.n_prime
       << " tau'=" << tau_prime << " R="
       << (m.removed_utilization ? m.removed_utilization->ToFixed(3) : "nan")
       << " K="
       << (m.remaining_utilization ? m.remaining_utilization->ToFixed(3)
                                   : "nan");
  if (r.certificate.lower_bound.Ceil() != 116864 &&
      r.certificate.lower_bound.Floor() != 116864) {
    problems.push_back("L does not round to 116864");
  }
  if (r.certificate.deletion_budget != 5843) {
    problems.push_back("k_del != 5843");
  }
  if (!WithinRelative(static_cast<double>(m.n_prime), 1069118,
                      kRelativeTolerance)) {
    problems.push_back("n' outside 1069118 +-5%");
  }
  if (!WithinRelative(static_cast<double>(tau_prime), 81357,
                      kRelativeTolerance)) {
    problems.push_back("tau' outside 81357 +-5%");
  }
  if (!m.removed_utilization ||
      *m.removed_utilization < Rational::Parse("0.93")) {
    problems.push_back("R < 0.93");
  }
  if (!m.remaining_utilization ||
      *m.remaining_utilization < Rational::Parse("1.25") ||
      *m.remaining_utilization > Rational::Parse("1.45")) {
    problems.push_back("K outside [1.25, 1.45]");
  }
  std::string detail = seen.str();
  for (const std::string& p : problems) detail += "; " + p;
  return TimeLimited(problems.empty() ? Pass(detail) : Fail(detail),
                     Seconds(begin), kAzureSeconds);
}

Outcome Criterion8() {
  const auto trace = EnvPath("DVBP_HUAWEI_TRACE");
  if (!trace) return Skip("DVBP_HUAWEI_TRACE not set");
  const auto begin = Clock::now();
  if (!HuaweiInstance()) HuaweiInstance() = IngestFile(*trace, "huawei");
  ReductionResult r =
      Reduce(*HuaweiInstance(), Rational(1, 50), PriorityMode::kF2);
  const size_t tau_prime = GroupTypes(r.reduced).entries.size();
  const std::string detail = "tau'=" + std::to_string(tau_prime) +
                             " at eps=0.02 (limit 6300)";
  return TimeLimited(tau_prime <= 6300 ? Pass(detail) : Fail(detail),
                     Seconds(begin), kHuaweiSeconds);
}

// Runs the HiGHS helper on `models`; nullopt when the solver is missing.
std::optional<std::vector<std::string>> SolveWithHighs(
    const std::vector<std::string>& models) {
  std::string command = "python3 " + std::string(DVBP_SOURCE_DIR) +
                        "/tests/solve_lp.py";
  for (const std::string& m : models) command += " '" + m + "'";
  command += " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return std::nullopt;
  std::string out;
  std::array<char, 4096> buffer;
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    out.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != 0 && code != 1) return std::nullopt;
  std::vector<std::string> lines;
  std::istringstream stream(out);
  for (std::string line; std::getline(stream, line);) lines.push_back(line);
  return lines;
}

Outcome Criterion9() {
  const auto begin = Clock::now();
  const fs::path dir = fs::temp_directory_path() /
                       ("dvbp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  std::vector<Instance> instances;
  instances.push_back(
      testing::Make({2}, {{{1}, 1, 2}, {{1}, 1, 2}, {{1}, 1, 2}}));
  instances.push_back(testing::Make({1}, {}));
  std::mt19937_64 rng(1009);
  while (instances.size() < 22) {
    instances.push_back(testing::RandomInstance(
        rng, {.min_n = 1, .max_n = 7, .max_d = 2, .max_time = 6}));
  }
  std::vector<std::string> models;
  std::vector<int64_t> expected;
  for (size_t i = 0; i < instances.size(); ++i) {
    const Instance& instance = instances[i];
    const int64_t opt = BruteForceOpt(instance).bins;
    const int64_t k = i == 0 ? 2 : std::max<int64_t>(1, instance.size());
    const std::string path = (dir / ("m" + std::to_string(i) + ".lp")).string();
    WriteFile(path, ExportIlp(instance, k).lp);
    models.push_back(path);
    expected.push_back(opt);
  }
  auto solved = SolveWithHighs(models);
  fs::remove_all(dir);
  if (!solved) return Skip("python3 with highspy not available");
  if (solved->size() != models.size()) {
    return Fail("solver produced " + std::to_string(solved->size()) +
                " results for " + std::to_string(models.size()) + " models");
  }
  Failures failures;
  for (size_t i = 0; i < models.size(); ++i) {
    if ((*solved)[i] != std::to_string(expected[i])) {
      failures.Add("model " + std::to_string(i) + ": solver " + (*solved)[i] +
                   ", brute force " + std::to_string(expected[i]));
    }
  }
  Outcome out = failures.empty()
                    ? Pass(std::to_string(models.size()) +
                           " models solved by HiGHS match brute force")
                    : Fail(failures.Summary());
  return TimeLimited(out, Seconds(begin), kSolverSeconds);
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace dvbp

int main() {
  using dvbp::Verdict;
  const std::vector<dvbp::Criterion> criteria = {
      {1, "reduction guarantee", dvbp::Criterion1},
      {2, "time compression", dvbp::Criterion2},
      {3, "solver agreement", dvbp::Criterion3},
      {4, "greedy contracts", dvbp::Criterion4},
      {5, "bounds soundness", dvbp::Criterion5},
      {6, "huawei pipeline", dvbp::Criterion6},
      {7, "azure pipeline", dvbp::Criterion7},
      {8, "huawei sweep shape", dvbp::Criterion8},
      {9, "ilp export", dvbp::Criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    dvbp::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = dvbp::Fail(std::string("exception: ") + e.what());
    }
    const char* tag = outcome.verdict == Verdict::kPass   ? "PASS"
                      : outcome.verdict == Verdict::kFail ? "FAIL"
                                                          : "SKIP";
    if (outcome.verdict == Verdict::kFail) ++failed;
    std::cout << "[" << tag << "] criterion " << c.number << " (" << c.name
              << "): " << outcome.detail << std::endl;
  }
  std::cout << (failed == 0 ? "acceptance: all evaluated criteria passed"
                            : "acceptance: " + std::to_string(failed) +
                                  " criterion(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
