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

// dvbp command-line tool. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dvbp/dvbp.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Carries a library status out of a subcommand.
class StatusError : public std::runtime_error {
 public:
  StatusError(dvbp_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  dvbp_status status() const { return status_; }

 private:
  dvbp_status status_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Check(dvbp_status status) {
  if (status != DVBP_OK) throw StatusError(status, dvbp_last_error());
}

int ExitCodeFor(dvbp_status status) {
  switch (status) {
    case DVBP_OK:
      return kExitOk;
    case DVBP_ERR_PARSE:
    case DVBP_ERR_VALIDATION:
    case DVBP_ERR_INFEASIBLE:
    case DVBP_ERR_OVERFLOW:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

struct InstanceDeleter {
  void operator()(dvbp_instance* p) const { dvbp_instance_free(p); }
};
struct PackingDeleter {
  void operator()(dvbp_packing* p) const { dvbp_packing_free(p); }
};
struct CertificateDeleter {
  void operator()(dvbp_certificate* p) const { dvbp_certificate_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { dvbp_string_free(p); }
};

using InstancePtr = std::unique_ptr<dvbp_instance, InstanceDeleter>;
using PackingPtr = std::unique_ptr<dvbp_packing, PackingDeleter>;
using CertificatePtr = std::unique_ptr<dvbp_certificate, CertificateDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string Take(char* text) {
  StringPtr owner(text);
  return owner ? std::string(owner.get()) : std::string();
}

InstancePtr LoadInstance(const std::string& path, bool drop_empty) {
  dvbp_instance* raw = nullptr;
  Check(dvbp_instance_load(path.c_str(), drop_empty ? DVBP_DROP_EMPTY : 0,
                           &raw));
  InstancePtr instance(raw);
  if (size_t dropped = dvbp_instance_dropped_empty(raw); dropped > 0) {
    std::cerr << "dropped " << dropped << " empty request(s)\n";
  }
  return instance;
}

PackingPtr LoadPacking(const std::string& path) {
  dvbp_packing* raw = nullptr;
  Check(dvbp_packing_load(path.c_str(), &raw));
  return PackingPtr(raw);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw StatusError(DVBP_ERR_IO, "cannot write " + path);
  }
  out << text;
  out.flush();
  if (!out) throw StatusError(DVBP_ERR_IO, "error writing " + path);
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    WriteText(path, text);
  }
}

std::string RationalString(const dvbp_rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

dvbp_format InstanceFormat(const std::string& name) {
  return name == "json" ? DVBP_FORMAT_JSON : DVBP_FORMAT_TEXT;
}

dvbp_format PackingFormat(const std::string& name) {
  return name == "json" ? DVBP_FORMAT_JSON : DVBP_FORMAT_TEXT;
}

const std::map<std::string, dvbp_priority_mode> kModes = {
    {"alpha", DVBP_PRIORITY_ALPHA},
    {"f1", DVBP_PRIORITY_F1},
    {"f2", DVBP_PRIORITY_F2},
};

const std::map<std::string, dvbp_upper_bound_variant> kVariants = {
    {"as-written", DVBP_UPPER_BOUND_AS_WRITTEN},
    {"scaled", DVBP_UPPER_BOUND_SCALED},
};

const std::map<std::string, dvbp_solver> kSolvers = {
    {"heuristic", DVBP_SOLVER_HEURISTIC},
    {"brute", DVBP_SOLVER_BRUTE},
    {"dp", DVBP_SOLVER_DP},
};

fs::path PresetDirectory() {
  if (const char* env = std::getenv("DVBP_PRESET_DIR"); env && *env) {
    return env;
  }
#ifdef DVBP_PRESET_DIR
  return DVBP_PRESET_DIR;
#else
  return "presets";
#endif
}

struct Options {
  bool drop_empty = false;

  std::string instance;
  std::string out;
  std::string format = "text";
  std::string packing_format = "csv";

  std::string epsilon;
  std::string mode = "f2";
  std::string variant = "as-written";
  bool no_recompress = false;

  std::string eps_from = "0";
  std::string eps_to = "0.2";
  std::string eps_step = "0.01";
  unsigned threads = 0;
  bool no_timing = false;

  int64_t bins = 1;
  std::optional<int64_t> dp_bins;
  std::string packing;
  std::string solver;
  int64_t limit = 0;
  int64_t max_height = 0;
  int64_t max_bins = 0;

  std::string sidecar;

  std::string trace;
  std::string schema;
  std::string preset;
  std::string report;

  std::string certificate;
  std::string original;
};

int RunStats(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_stats s;
  Check(dvbp_instance_stats(instance.get(), &s));
  std::string text = "n=" + std::to_string(s.n) + "\n" +
                     "d=" + std::to_string(s.d) + "\n" +
                     "T=" + std::to_string(s.horizon) + "\n" +
                     "h=" + std::to_string(s.height) + "\n" +
                     "phi=" + std::to_string(s.flavors) + "\n" +
                     "tau=" + std::to_string(s.types) + "\n" +
                     "L=" + RationalString(s.lower_bound) + "\n";
  Emit(o.out, text);
  return kExitOk;
}

int RunCompress(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_instance* raw = nullptr;
  int64_t horizon = 0;
  Check(dvbp_compress_time(instance.get(), &raw, &horizon));
  InstancePtr compressed(raw);
  char* text = nullptr;
  Check(dvbp_instance_serialize(compressed.get(), InstanceFormat(o.format),
                                &text));
  Emit(o.out, Take(text));
  return kExitOk;
}

int RunReduce(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_reduce_options options;
  dvbp_reduce_options_init(&options);
  options.recompress = o.no_recompress ? 0 : 1;
  options.upper_bound_variant = kVariants.at(o.variant);

  dvbp_instance* reduced_raw = nullptr;
  dvbp_certificate* certificate_raw = nullptr;
  Check(dvbp_reduce(instance.get(), o.epsilon.c_str(), kModes.at(o.mode),
                    &options, &reduced_raw, &certificate_raw));
  InstancePtr reduced(reduced_raw);
  CertificatePtr certificate(certificate_raw);

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw StatusError(DVBP_ERR_IO, "cannot create " + o.out);
  const fs::path dir(o.out);

  char* text = nullptr;
  Check(dvbp_instance_serialize(reduced.get(), DVBP_FORMAT_TEXT, &text));
  WriteText((dir / "reduced.txt").string(), Take(text));
  Check(dvbp_instance_serialize(reduced.get(), DVBP_FORMAT_JSON, &text));
  WriteText((dir / "reduced.json").string(), Take(text));
  Check(dvbp_certificate_serialize(certificate.get(), &text));
  WriteText((dir / "certificate.json").string(), Take(text));
  Check(dvbp_reduce_metrics_csv(reduced.get(), certificate.get(), &text));
  std::string metrics = Take(text);
  WriteText((dir / "metrics.csv").string(), metrics);
  std::cout << metrics;
  return kExitOk;
}

int RunSweep(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_reduce_options options;
  dvbp_reduce_options_init(&options);
  options.recompress = o.no_recompress ? 0 : 1;
  options.upper_bound_variant = kVariants.at(o.variant);
  char* csv = nullptr;
  Check(dvbp_sweep(instance.get(), o.eps_from.c_str(), o.eps_to.c_str(),
                   o.eps_step.c_str(), kModes.at(o.mode), &options, o.threads,
                   o.no_timing ? 0 : 1, &csv));
  Emit(o.out, Take(csv));
  return kExitOk;
}

int RunBounds(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_rational lower;
  Check(dvbp_lower_bound(instance.get(), &lower));
  int64_t upper = 0;
  Check(dvbp_upper_bound_removable(instance.get(), o.bins,
                                   kVariants.at(o.variant), &upper));
  Emit(o.out, "L=" + RationalString(lower) + "\n" +
                  "k=" + std::to_string(o.bins) + "\n" +
                  "U=" + std::to_string(upper) + "\n");
  return kExitOk;
}

int RunCheck(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  PackingPtr packing = LoadPacking(o.packing);
  int feasible = 0;
  char* report = nullptr;
  Check(dvbp_verify(instance.get(), packing.get(), &feasible, &report));
  std::string text = Take(report);
  if (feasible) {
    std::cout << "feasible bins=" << dvbp_packing_bins(packing.get()) << "\n";
    return kExitOk;
  }
  std::cout << "infeasible\n" << text;
  if (!text.empty() && text.back() != '\n') std::cout << "\n";
  return kExitFailure;
}

int RunSolve(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  dvbp_solve_options options;
  dvbp_solve_options_init(&options);
  options.mode = kModes.at(o.mode);
  options.brute_force_limit = o.limit;
  options.dp_max_height = o.max_height;
  options.dp_max_bins = o.max_bins;
  const dvbp_solver solver = kSolvers.at(o.solver);

  dvbp_packing* raw = nullptr;
  if (o.dp_bins) {
    if (solver != DVBP_SOLVER_DP) {
      throw UsageError("--k applies only to the dp solver");
    }
    int feasible = 0;
    Check(dvbp_dp_feasible(instance.get(), *o.dp_bins, &options, &feasible,
                           &raw));
    if (!feasible) {
      std::cerr << "no packing into " << *o.dp_bins << " bin(s)\n";
      return kExitFailure;
    }
  } else {
    Check(dvbp_solve(instance.get(), solver, &options, &raw));
  }
  PackingPtr packing(raw);
  char* text = nullptr;
  Check(dvbp_packing_serialize(packing.get(), PackingFormat(o.packing_format),
                               &text));
  Emit(o.out, Take(text));
  std::cerr << "bins=" << dvbp_packing_bins(packing.get()) << "\n";
  return kExitOk;
}

int RunExportIlp(const Options& o) {
  InstancePtr instance = LoadInstance(o.instance, o.drop_empty);
  char* lp = nullptr;
  char* sidecar = nullptr;
  Check(dvbp_export_ilp(instance.get(), o.bins, &lp,
                        o.sidecar.empty() ? nullptr : &sidecar));
  std::string lp_text = Take(lp);
  std::string sidecar_text = Take(sidecar);
  Emit(o.out, lp_text);
  if (!o.sidecar.empty()) WriteText(o.sidecar, sidecar_text);
  return kExitOk;
}

int RunIngest(const Options& o) {
  std::string schema = o.schema;
  if (schema.empty() == o.preset.empty()) {
    throw UsageError("give exactly one of --schema or --preset");
  }
  if (!o.preset.empty()) {
    schema = (PresetDirectory() / (o.preset + ".json")).string();
  }
  dvbp_instance* raw = nullptr;
  char* report = nullptr;
  Check(dvbp_ingest_trace(o.trace.c_str(), schema.c_str(), &raw, &report));
  InstancePtr instance(raw);
  std::string report_text = Take(report);
  char* text = nullptr;
  Check(dvbp_instance_serialize(instance.get(), InstanceFormat(o.format),
                                &text));
  Emit(o.out, Take(text));
  if (!o.report.empty()) {
    WriteText(o.report, report_text);
  } else {
    std::cerr << report_text;
  }
  return kExitOk;
}

int RunLift(const Options& o) {
  dvbp_certificate* cert_raw = nullptr;
  Check(dvbp_certificate_load(o.certificate.c_str(), &cert_raw));
  CertificatePtr certificate(cert_raw);
  PackingPtr reduced = LoadPacking(o.packing);
  InstancePtr original = LoadInstance(o.original, o.drop_empty);
  dvbp_packing* raw = nullptr;
  Check(dvbp_lift(certificate.get(), reduced.get(), original.get(), &raw));
  PackingPtr lifted(raw);
  char* text = nullptr;
  Check(dvbp_packing_serialize(lifted.get(), PackingFormat(o.packing_format),
                               &text));
  Emit(o.out, Take(text));
  std::cerr << "bins=" << dvbp_packing_bins(lifted.get()) << "\n";
  return kExitOk;
}

void AddInstance(CLI::App* cmd, Options& o) {
  cmd->add_option("instance", o.instance, "Instance file (text or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
}

void AddMode(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Greedy priority: alpha, f1 or f2")
      ->check(CLI::IsMember({"alpha", "f1", "f2"}))
      ->capture_default_str();
}

void AddVariant(CLI::App* cmd, Options& o) {
  cmd->add_option("--u-variant", o.variant,
                  "Upper bound budget: as-written or scaled")
      ->check(CLI::IsMember({"as-written", "scaled"}))
      ->capture_default_str();
}

void AddInstanceFormat(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

void AddPackingFormat(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.packing_format, "Packing format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic vector bin packing: data reduction and solvers"};
  app.set_version_flag("--version", std::string(dvbp_version()));
  app.require_subcommand(1);
  Options o;
  app.add_flag("--drop-empty", o.drop_empty,
               "Drop requests whose demand is all zero");

  CLI::App* stats = app.add_subcommand("stats", "Instance statistics");
  AddInstance(stats, o);
  stats->add_option("-o,--out", o.out, "Output file (default stdout)");

  CLI::App* compress =
      app.add_subcommand("compress", "Compress the time axis");
  AddInstance(compress, o);
  compress->add_option("-o,--out", o.out, "Output file (default stdout)");
  AddInstanceFormat(compress, o);

  CLI::App* reduce = app.add_subcommand(
      "reduce", "Delete requests packable into floor(eps*L) bins");
  AddInstance(reduce, o);
  reduce->add_option("--epsilon", o.epsilon, "Epsilon as decimal or fraction")
      ->required();
  AddMode(reduce, o);
  AddVariant(reduce, o);
  reduce->add_flag("--no-recompress", o.no_recompress,
                   "Compress time only once, after the last deletion");
  reduce->add_option("--out", o.out, "Output directory")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Reduce for a range of eps");
  AddInstance(sweep, o);
  sweep->add_option("--eps-from", o.eps_from)->capture_default_str();
  sweep->add_option("--eps-to", o.eps_to)->capture_default_str();
  sweep->add_option("--eps-step", o.eps_step)->capture_default_str();
  AddMode(sweep, o);
  AddVariant(sweep, o);
  sweep->add_flag("--no-recompress", o.no_recompress);
  sweep->add_option("--threads", o.threads,
                    "Worker threads (0: DVBP_THREADS or all cores)");
  sweep->add_flag("--no-timing", o.no_timing,
                  "Write 0 in the seconds column");
  sweep->add_option("-o,--out", o.out, "Output CSV (default stdout)");

  CLI::App* bounds = app.add_subcommand("bounds", "Lower bound L and U(k)");
  AddInstance(bounds, o);
  bounds->add_option("--k", o.bins, "Bins for U")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  AddVariant(bounds, o);
  bounds->add_option("-o,--out", o.out, "Output file (default stdout)");

  CLI::App* check = app.add_subcommand("check", "Verify a packing");
  AddInstance(check, o);
  check->add_option("packing", o.packing, "Packing file (CSV or JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("solver", o.solver, "heuristic, brute or dp")
      ->required()
      ->check(CLI::IsMember({"heuristic", "brute", "dp"}));
  AddInstance(solve, o);
  AddMode(solve, o);
  solve->add_option("--limit", o.limit, "Largest n for brute force");
  solve->add_option("--max-height", o.max_height, "Largest h for dp");
  solve->add_option("--max-bins", o.max_bins, "Largest k for dp");
  solve->add_option("--k", o.dp_bins, "Decide whether k bins suffice (dp)");
  AddPackingFormat(solve, o);
  solve->add_option("-o,--out", o.out, "Output packing (default stdout)");

  CLI::App* ilp = app.add_subcommand("export-ilp", "Write the ILP model");
  AddInstance(ilp, o);
  ilp->add_option("--k", o.bins, "Number of bins")->required();
  ilp->add_option("-o,--out", o.out, "LP file (default stdout)");
  ilp->add_option("--sidecar", o.sidecar, "Variable map JSON");

  CLI::App* ingest = app.add_subcommand("ingest", "Convert a VM trace");
  ingest->add_option("trace", o.trace, "Trace CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--schema", o.schema, "Schema JSON")
      ->check(CLI::ExistingFile);
  ingest->add_option("--preset", o.preset, "Shipped schema: huawei or azure");
  AddInstanceFormat(ingest, o);
  ingest->add_option("-o,--out", o.out, "Output instance (default stdout)");
  ingest->add_option("--report", o.report, "Ingestion report JSON");

  CLI::App* lift = app.add_subcommand(
      "lift", "Turn a reduced packing into one for the original instance");
  lift->add_option("certificate", o.certificate)
      ->required()
      ->check(CLI::ExistingFile);
  lift->add_option("packing", o.packing, "Packing of the reduced instance")
      ->required()
      ->check(CLI::ExistingFile);
  lift->add_option("original", o.original, "Original instance")
      ->required()
      ->check(CLI::ExistingFile);
  AddPackingFormat(lift, o);
  lift->add_option("-o,--out", o.out, "Output packing (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (stats->parsed()) return RunStats(o);
    if (compress->parsed()) return RunCompress(o);
    if (reduce->parsed()) return RunReduce(o);
    if (sweep->parsed()) return RunSweep(o);
    if (bounds->parsed()) return RunBounds(o);
    if (check->parsed()) return RunCheck(o);
    if (solve->parsed()) return RunSolve(o);
    if (ilp->parsed()) return RunExportIlp(o);
    if (ingest->parsed()) return RunIngest(o);
    if (lift->parsed()) return RunLift(o);
  } catch (const StatusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.status());
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
