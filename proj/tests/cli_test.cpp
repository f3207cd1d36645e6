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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "core/instance_io.h"
#include "core/packing.h"
#include "core/reduction.h"
#include "core/report.h"
#include "core/text.h"
#include "testing.h"

namespace dvbp {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stderr is discarded.
Outcome Cli(const std::string& args) {
  const std::string command =
      std::string(DVBP_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("dvbp_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    example_ = Path("example.txt");
    WriteFile(example_, "1 3\n10\n2 1 3\n9 2 4\n5 1 2\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  std::string example_;
};

TEST_F(CliTest, StatsOfExample) {
  Outcome r = Cli("stats " + example_);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "n=3\nd=1\nT=4\nh=2\nphi=3\ntau=3\nL=11/10\n");
}

TEST_F(CliTest, ZeroEpsilonReduceEqualsCompression) {
  Outcome compressed = Cli("compress " + example_);
  ASSERT_EQ(compressed.code, 0);
  ASSERT_EQ(Cli("reduce " + example_ + " --epsilon 0 --out " + Path("r")).code,
            0);
  EXPECT_EQ(ReadFile(Path("r/reduced.txt")), compressed.out);
  ReductionCertificate c =
      ParseCertificate(ReadFile(Path("r/certificate.json")));
  EXPECT_TRUE(c.deletion_bins.empty());
  EXPECT_EQ(c.deletion_budget, 0);
}

TEST_F(CliTest, ReduceOutputsAreReadableAndStable) {
  std::mt19937_64 rng(81);
  Instance instance =
      testing::RandomInstance(rng, {.min_n = 20, .max_n = 30, .max_d = 2});
  const std::string input = Path("random.json");
  WriteFile(input, FormatInstance(instance, InstanceFormat::kJson));

  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(Cli("reduce " + input + " --epsilon 0.5 --mode f1 --out " +
                  Path(out))
                  .code,
              0);
  }
  for (const char* file :
       {"reduced.txt", "reduced.json", "certificate.json", "metrics.csv"}) {
    EXPECT_EQ(ReadFile(Path(std::string("a/") + file)),
              ReadFile(Path(std::string("b/") + file)))
        << file;
  }
  Instance reduced_text = ParseInstance(ReadFile(Path("a/reduced.txt")));
  Instance reduced_json = ParseInstance(ReadFile(Path("a/reduced.json")));
  EXPECT_EQ(reduced_text.size(), reduced_json.size());
  EXPECT_EQ(ReadFile(Path("a/metrics.csv")).rfind(kMetricsHeader, 0), 0u);

  // Solve the reduced instance, lift, and check against the original.
  ASSERT_EQ(Cli("solve heuristic " + Path("a/reduced.json") + " -o " +
                Path("reduced.csv"))
                .code,
            0);
  ASSERT_EQ(Cli("lift " + Path("a/certificate.json") + " " +
                Path("reduced.csv") + " " + input + " -o " + Path("lifted.csv"))
                .code,
            0);
  EXPECT_EQ(Cli("check " + input + " " + Path("lifted.csv")).code, 0);
  EXPECT_TRUE(
      VerifyPacking(instance, ParsePacking(ReadFile(Path("lifted.csv"))))
          .feasible);
}

TEST_F(CliTest, CheckExitCodes) {
  WriteFile(Path("good.csv"), "request_id,bin\n1,1\n2,2\n3,1\n");
  WriteFile(Path("bad.csv"), "request_id,bin\n1,1\n2,1\n3,1\n");
  WriteFile(Path("foreign.csv"), "request_id,bin\n1,1\n2,1\n9,1\n");
  Outcome good = Cli("check " + example_ + " " + Path("good.csv"));
  EXPECT_EQ(good.code, 0);
  EXPECT_EQ(good.out, "feasible bins=2\n");
  Outcome bad = Cli("check " + example_ + " " + Path("bad.csv"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("infeasible", 0), 0u);
  EXPECT_EQ(Cli("check " + example_ + " " + Path("foreign.csv")).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("stats " + example_ + " --bogus").code, 2);
  EXPECT_EQ(Cli("stats " + Path("missing.txt")).code, 2);
  EXPECT_EQ(Cli("reduce " + example_ + " --out " + Path("x")).code, 2);
  EXPECT_EQ(Cli("reduce " + example_ + " --epsilon 0.1 --mode f9 --out " +
                Path("x"))
                .code,
            2);
  EXPECT_EQ(Cli("--help").code, 0);
}

TEST_F(CliTest, InvalidInstanceIsValidationFailure) {
  WriteFile(Path("bad.txt"), "1 1\n10\n11 1 2\n");
  EXPECT_EQ(Cli("stats " + Path("bad.txt")).code, 1);
  WriteFile(Path("empty.txt"), "1 1\n10\n3 4 4\n");
  EXPECT_EQ(Cli("stats " + Path("empty.txt")).code, 1);
  Outcome dropped = Cli("--drop-empty stats " + Path("empty.txt"));
  EXPECT_EQ(dropped.code, 0);
  EXPECT_EQ(dropped.out.rfind("n=0\n", 0), 0u);
}

TEST_F(CliTest, SolversAndRefusal) {
  Outcome brute = Cli("solve brute " + example_);
  EXPECT_EQ(brute.code, 0);
  EXPECT_TRUE(VerifyPacking(testing::ThreeRequestExample(),
                            ParsePacking(brute.out))
                  .feasible);
  EXPECT_EQ(ParsePacking(brute.out).bins, 2);
  EXPECT_EQ(ParsePacking(Cli("solve dp " + example_).out).bins, 2);
  EXPECT_EQ(Cli("solve dp " + example_ + " --k 1").code, 1);
  EXPECT_EQ(Cli("solve dp " + example_ + " --k 2").code, 0);
  Outcome json = Cli("solve heuristic " + example_ + " --format json");
  EXPECT_EQ(ParsePacking(json.out).bins, 2);

  std::string big = "1 13\n100\n";
  for (int i = 0; i < 13; ++i) big += "1 1 2\n";
  WriteFile(Path("big.txt"), big);
  EXPECT_EQ(Cli("solve brute " + Path("big.txt")).code, 2);
  EXPECT_EQ(Cli("solve dp " + Path("big.txt")).code, 2);
}

TEST_F(CliTest, SweepIsDeterministicAcrossThreads) {
  std::mt19937_64 rng(82);
  Instance instance = testing::RandomInstance(
      rng, {.min_n = 40, .max_n = 60, .max_d = 2, .max_time = 25});
  const std::string input = Path("random.txt");
  WriteFile(input, FormatInstance(instance, InstanceFormat::kText));
  Outcome one = Cli("sweep " + input + " --no-timing --threads 1");
  Outcome four = Cli("sweep " + input + " --no-timing --threads 4");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  std::vector<SweepRow> rows = ParseSweepCsv(one.out);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(SweepToCsv(rows, false), one.out);
  ASSERT_EQ(Cli("sweep " + input + " --eps-to 0.1 -o " + Path("s.csv")).code,
            0);
  EXPECT_EQ(ParseSweepCsv(ReadFile(Path("s.csv"))).size(), 11u);
}

TEST_F(CliTest, ExportIlpIsStable) {
  ASSERT_EQ(Cli("export-ilp " + example_ + " --k 2 -o " + Path("a.lp") +
                " --sidecar " + Path("a.json"))
                .code,
            0);
  ASSERT_EQ(Cli("export-ilp " + example_ + " --k 2 -o " + Path("b.lp")).code,
            0);
  EXPECT_EQ(ReadFile(Path("a.lp")), ReadFile(Path("b.lp")));
  EXPECT_NE(ReadFile(Path("a.json")).find("\"variables\""), std::string::npos);
  EXPECT_EQ(Cli("export-ilp " + example_ + " --k 0").code, 2);
}

TEST_F(CliTest, IngestWithPreset) {
  WriteFile(Path("trace.csv"),
            "vmid,cpu,memory,time,type\n"
            "1,2,4,10,0\n2,16,32,11,0\n1,2,4,20,1\n2,16,32,30,1\n");
  Outcome r = Cli("ingest " + Path("trace.csv") + " --preset huawei --report " +
                  Path("report.json"));
  ASSERT_EQ(r.code, 0);
  Instance instance = ParseInstance(r.out);
  ASSERT_EQ(instance.size(), 2u);
  EXPECT_EQ(instance.capacity(), ResourceVector({120, 90}));
  EXPECT_EQ(instance.request(0).demand, ResourceVector({2, 4}));
  EXPECT_EQ(instance.request(1).demand, ResourceVector({48, 32}));
  EXPECT_NE(ReadFile(Path("report.json")).find("\"requests\": 2"),
            std::string::npos);
  EXPECT_EQ(Cli("ingest " + Path("trace.csv")).code, 2);
  EXPECT_EQ(Cli("ingest " + Path("trace.csv") + " --preset nope").code, 2);
}

TEST_F(CliTest, BoundsOutput) {
  Outcome r = Cli("bounds " + example_ + " --k 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("L=11/10\nk=1\nU=", 0), 0u);
}

}  // namespace
}  // namespace dvbp
