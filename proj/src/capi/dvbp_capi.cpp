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

#include "dvbp/dvbp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/bounds.h"
#include "core/error.h"
#include "core/exact.h"
#include "core/ingest.h"
#include "core/instance_io.h"
#include "core/model.h"
#include "core/packing.h"
#include "core/rational.h"
#include "core/reduction.h"
#include "core/report.h"
#include "core/text.h"
#include "core/timeline.h"

struct dvbp_instance {
  dvbp::Instance instance;
  size_t dropped_empty = 0;
};

struct dvbp_packing {
  dvbp::Packing packing;
};

struct dvbp_certificate {
  dvbp::ReductionCertificate certificate;
};

namespace {

thread_local std::string last_error;

dvbp_status ToStatus(dvbp::ErrorCode code) {
  switch (code) {
    case dvbp::ErrorCode::kInvalidArgument:
      return DVBP_ERR_INVALID_ARGUMENT;
    case dvbp::ErrorCode::kParse:
      return DVBP_ERR_PARSE;
    case dvbp::ErrorCode::kValidation:
      return DVBP_ERR_VALIDATION;
    case dvbp::ErrorCode::kInfeasible:
      return DVBP_ERR_INFEASIBLE;
    case dvbp::ErrorCode::kRefused:
      return DVBP_ERR_REFUSED;
    case dvbp::ErrorCode::kIo:
      return DVBP_ERR_IO;
    case dvbp::ErrorCode::kOverflow:
      return DVBP_ERR_OVERFLOW;
    case dvbp::ErrorCode::kInternal:
      return DVBP_ERR_INTERNAL;
  }
  return DVBP_ERR_INTERNAL;
}

dvbp_status Fail(dvbp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
dvbp_status Guard(F&& body) {
  try {
    last_error.clear();
    body();
    return DVBP_OK;
  } catch (const dvbp::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(DVBP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(DVBP_ERR_INTERNAL, e.what());
  }
}

void Require(bool condition, const char* message) {
  if (!condition) {
    throw dvbp::Error(dvbp::ErrorCode::kInvalidArgument, message);
  }
}

char* CopyString(std::string_view text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size());
  out[text.size()] = '\0';
  return out;
}

dvbp_rational ToC(const dvbp::Rational& r) { return {r.num(), r.den()}; }

dvbp::PriorityMode ToMode(dvbp_priority_mode mode) {
  switch (mode) {
    case DVBP_PRIORITY_ALPHA:
      return dvbp::PriorityMode::kAlpha;
    case DVBP_PRIORITY_F1:
      return dvbp::PriorityMode::kF1;
    case DVBP_PRIORITY_F2:
      return dvbp::PriorityMode::kF2;
  }
  throw dvbp::Error(dvbp::ErrorCode::kInvalidArgument,
                    "unknown priority mode");
}

dvbp::UpperBoundVariant ToVariant(dvbp_upper_bound_variant variant) {
  switch (variant) {
    case DVBP_UPPER_BOUND_AS_WRITTEN:
      return dvbp::UpperBoundVariant::kAsWritten;
    case DVBP_UPPER_BOUND_SCALED:
      return dvbp::UpperBoundVariant::kScaled;
  }
  throw dvbp::Error(dvbp::ErrorCode::kInvalidArgument,
                    "unknown upper bound variant");
}

dvbp::ReductionOptions ToReductionOptions(const dvbp_reduce_options* options) {
  dvbp::ReductionOptions out;
  if (options != nullptr) {
    out.recompress = options->recompress != 0;
    out.upper_bound_variant = ToVariant(options->upper_bound_variant);
  }
  return out;
}

dvbp::Rational ParseRational(const char* text, const char* what) {
  if (text == nullptr) {
    throw dvbp::Error(dvbp::ErrorCode::kInvalidArgument,
                      std::string(what) + " is required");
  }
  return dvbp::Rational::Parse(text);
}

dvbp_instance* LoadFromText(std::string_view text, int flags) {
  dvbp::ValidateOptions options;
  options.drop_empty = (flags & DVBP_DROP_EMPTY) != 0;
  dvbp::ValidationResult result =
      dvbp::ValidateInstance(dvbp::ParseRawInstance(text), options);
  if (!result.ok()) {
    std::string message = "invalid instance";
    size_t shown = 0;
    for (const std::string& error : result.errors) {
      if (shown++ == 20) {
        message += "\n  ...";
        break;
      }
      message += "\n  " + error;
    }
    throw dvbp::Error(dvbp::ErrorCode::kValidation, message);
  }
  return new dvbp_instance{std::move(*result.instance), result.dropped_empty};
}

}  // namespace

extern "C" {

const char* dvbp_version(void) { return "0.1.0"; }

const char* dvbp_last_error(void) { return last_error.c_str(); }

const char* dvbp_status_string(dvbp_status status) {
  switch (status) {
    case DVBP_OK:
      return "ok";
    case DVBP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DVBP_ERR_PARSE:
      return "parse error";
    case DVBP_ERR_VALIDATION:
      return "validation error";
    case DVBP_ERR_INFEASIBLE:
      return "infeasible";
    case DVBP_ERR_REFUSED:
      return "refused";
    case DVBP_ERR_IO:
      return "i/o error";
    case DVBP_ERR_OVERFLOW:
      return "overflow";
    case DVBP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void dvbp_string_free(char* text) { std::free(text); }

void dvbp_reduce_options_init(dvbp_reduce_options* options) {
  if (options == nullptr) return;
  options->recompress = 1;
  options->upper_bound_variant = DVBP_UPPER_BOUND_AS_WRITTEN;
}

void dvbp_solve_options_init(dvbp_solve_options* options) {
  if (options == nullptr) return;
  options->mode = DVBP_PRIORITY_F2;
  options->brute_force_limit = 0;
  options->dp_max_height = 0;
  options->dp_max_bins = 0;
}

dvbp_status dvbp_instance_load(const char* path, int flags,
                               dvbp_instance** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = LoadFromText(dvbp::ReadFile(path), flags);
  });
}

dvbp_status dvbp_instance_parse(const char* text, size_t length, int flags,
                                dvbp_instance** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = LoadFromText(std::string_view(text, length), flags);
  });
}

dvbp_status dvbp_instance_serialize(const dvbp_instance* instance,
                                    dvbp_format format, char** out) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    *out = CopyString(dvbp::FormatInstance(
        instance->instance, format == DVBP_FORMAT_JSON
                                ? dvbp::InstanceFormat::kJson
                                : dvbp::InstanceFormat::kText));
  });
}

dvbp_status dvbp_instance_save(const dvbp_instance* instance, const char* path,
                               dvbp_format format) {
  return Guard([&] {
    Require(instance != nullptr && path != nullptr, "null argument");
    dvbp::WriteFile(path, dvbp::FormatInstance(
                              instance->instance,
                              format == DVBP_FORMAT_JSON
                                  ? dvbp::InstanceFormat::kJson
                                  : dvbp::InstanceFormat::kText));
  });
}

void dvbp_instance_free(dvbp_instance* instance) { delete instance; }

size_t dvbp_instance_size(const dvbp_instance* instance) {
  return instance == nullptr ? 0 : instance->instance.size();
}

size_t dvbp_instance_dimension(const dvbp_instance* instance) {
  return instance == nullptr ? 0 : instance->instance.dimension();
}

size_t dvbp_instance_dropped_empty(const dvbp_instance* instance) {
  return instance == nullptr ? 0 : instance->dropped_empty;
}

dvbp_status dvbp_instance_stats(const dvbp_instance* instance,
                                dvbp_stats* out) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    dvbp::InstanceStats stats = dvbp::ComputeStats(instance->instance);
    out->n = static_cast<int64_t>(stats.n);
    out->d = static_cast<int64_t>(stats.d);
    out->horizon = stats.T;
    out->height = static_cast<int64_t>(stats.h);
    out->flavors = static_cast<int64_t>(stats.phi);
    out->types = static_cast<int64_t>(stats.tau);
    out->lower_bound = ToC(dvbp::LowerBound(instance->instance));
  });
}

dvbp_status dvbp_compress_time(const dvbp_instance* instance,
                               dvbp_instance** out, int64_t* horizon) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    dvbp::CompressedInstance compressed =
        dvbp::CompressTime(instance->instance);
    if (horizon != nullptr) *horizon = compressed.map.horizon();
    *out = new dvbp_instance{std::move(compressed.instance), 0};
  });
}

dvbp_status dvbp_lower_bound(const dvbp_instance* instance,
                             dvbp_rational* out) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    *out = ToC(dvbp::LowerBound(instance->instance));
  });
}

dvbp_status dvbp_upper_bound_removable(const dvbp_instance* instance,
                                       int64_t bins,
                                       dvbp_upper_bound_variant variant,
                                       int64_t* out) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    *out = dvbp::UpperBoundRemovable(instance->instance, bins,
                                     ToVariant(variant));
  });
}

dvbp_status dvbp_reduce(const dvbp_instance* instance, const char* epsilon,
                        dvbp_priority_mode mode,
                        const dvbp_reduce_options* options,
                        dvbp_instance** reduced,
                        dvbp_certificate** certificate) {
  return Guard([&] {
    Require(instance != nullptr && reduced != nullptr &&
                certificate != nullptr,
            "null argument");
    dvbp::ReductionResult result =
        dvbp::Reduce(instance->instance, ParseRational(epsilon, "epsilon"),
                     ToMode(mode), ToReductionOptions(options));
    auto* reduced_handle = new dvbp_instance{std::move(result.reduced), 0};
    try {
      *certificate = new dvbp_certificate{std::move(result.certificate)};
    } catch (...) {
      delete reduced_handle;
      throw;
    }
    *reduced = reduced_handle;
  });
}

dvbp_status dvbp_reduce_metrics_csv(const dvbp_instance* reduced,
                                    const dvbp_certificate* certificate,
                                    char** out) {
  return Guard([&] {
    Require(reduced != nullptr && certificate != nullptr && out != nullptr,
            "null argument");
    dvbp::ReductionResult result{reduced->instance, certificate->certificate};
    *out = CopyString(dvbp::MetricsToCsv(result));
  });
}

dvbp_status dvbp_certificate_load(const char* path, dvbp_certificate** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new dvbp_certificate{dvbp::ParseCertificate(dvbp::ReadFile(path))};
  });
}

dvbp_status dvbp_certificate_parse(const char* json, size_t length,
                                   dvbp_certificate** out) {
  return Guard([&] {
    Require(json != nullptr && out != nullptr, "null argument");
    *out = new dvbp_certificate{
        dvbp::ParseCertificate(std::string_view(json, length))};
  });
}

dvbp_status dvbp_certificate_serialize(const dvbp_certificate* certificate,
                                       char** out) {
  return Guard([&] {
    Require(certificate != nullptr && out != nullptr, "null argument");
    *out = CopyString(dvbp::CertificateToJson(certificate->certificate));
  });
}

dvbp_status dvbp_certificate_metrics(const dvbp_certificate* certificate,
                                     dvbp_metrics* out) {
  return Guard([&] {
    Require(certificate != nullptr && out != nullptr, "null argument");
    const dvbp::ReductionCertificate& c = certificate->certificate;
    const dvbp::Metrics& m = c.metrics;
    *out = dvbp_metrics{};
    out->epsilon = ToC(c.epsilon);
    out->lower_bound = ToC(c.lower_bound);
    out->deletion_budget = c.deletion_budget;
    out->deletion_bins = static_cast<int64_t>(c.deletion_bins.size());
    out->n = m.n;
    out->n_prime = m.n_prime;
    out->upper_bound = m.upper_bound;
    if (m.removed_utilization) {
      out->has_removed_utilization = 1;
      out->removed_utilization = ToC(*m.removed_utilization);
    }
    if (m.remaining_utilization) {
      out->has_remaining_utilization = 1;
      out->remaining_utilization = ToC(*m.remaining_utilization);
    }
  });
}

void dvbp_certificate_free(dvbp_certificate* certificate) {
  delete certificate;
}

dvbp_status dvbp_lift(const dvbp_certificate* certificate,
                      const dvbp_packing* reduced_packing,
                      const dvbp_instance* original, dvbp_packing** out) {
  return Guard([&] {
    Require(certificate != nullptr && reduced_packing != nullptr &&
                original != nullptr && out != nullptr,
            "null argument");
    *out = new dvbp_packing{dvbp::LiftSolution(certificate->certificate,
                                               reduced_packing->packing,
                                               original->instance)};
  });
}

dvbp_status dvbp_packing_load(const char* path, dvbp_packing** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new dvbp_packing{dvbp::ParsePacking(dvbp::ReadFile(path))};
  });
}

dvbp_status dvbp_packing_parse(const char* text, size_t length,
                               dvbp_packing** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new dvbp_packing{
        dvbp::ParsePacking(std::string_view(text, length))};
  });
}

dvbp_status dvbp_packing_serialize(const dvbp_packing* packing,
                                   dvbp_format format, char** out) {
  return Guard([&] {
    Require(packing != nullptr && out != nullptr, "null argument");
    *out = CopyString(format == DVBP_FORMAT_JSON
                          ? dvbp::PackingToJson(packing->packing)
                          : dvbp::PackingToCsv(packing->packing));
  });
}

int64_t dvbp_packing_bins(const dvbp_packing* packing) {
  return packing == nullptr ? 0 : packing->packing.bins;
}

size_t dvbp_packing_size(const dvbp_packing* packing) {
  return packing == nullptr ? 0 : packing->packing.assignment.size();
}

int64_t dvbp_packing_bin_of(const dvbp_packing* packing, int64_t id) {
  if (packing == nullptr) return 0;
  return packing->packing.BinOf(id).value_or(0);
}

void dvbp_packing_free(dvbp_packing* packing) { delete packing; }

dvbp_status dvbp_verify(const dvbp_instance* instance,
                        const dvbp_packing* packing, int* feasible,
                        char** report) {
  return Guard([&] {
    Require(instance != nullptr && packing != nullptr && feasible != nullptr,
            "null argument");
    dvbp::VerificationReport result =
        dvbp::VerifyPacking(instance->instance, packing->packing);
    if (report != nullptr) *report = CopyString(result.Describe());
    *feasible = result.feasible ? 1 : 0;
  });
}

dvbp_status dvbp_greedy_pack_bin(const dvbp_instance* instance,
                                 const int64_t* candidates,
                                 size_t candidate_count,
                                 dvbp_priority_mode mode, int64_t* packed,
                                 size_t* packed_count) {
  return Guard([&] {
    Require(instance != nullptr && packed != nullptr &&
                packed_count != nullptr,
            "null argument");
    std::vector<dvbp::RequestId> ids;
    if (candidates == nullptr) {
      for (const dvbp::Request& r : instance->instance.requests()) {
        ids.push_back(r.id);
      }
    } else {
      ids.assign(candidates, candidates + candidate_count);
    }
    std::vector<dvbp::RequestId> chosen =
        dvbp::GreedyPackBin(instance->instance, ids, ToMode(mode));
    std::copy(chosen.begin(), chosen.end(), packed);
    *packed_count = chosen.size();
  });
}

dvbp_status dvbp_solve(const dvbp_instance* instance, dvbp_solver solver,
                       const dvbp_solve_options* options, dvbp_packing** out) {
  return Guard([&] {
    Require(instance != nullptr && out != nullptr, "null argument");
    dvbp_solve_options o;
    dvbp_solve_options_init(&o);
    if (options != nullptr) o = *options;
    switch (solver) {
      case DVBP_SOLVER_HEURISTIC:
        *out = new dvbp_packing{
            dvbp::HeuristicSolve(instance->instance, ToMode(o.mode))};
        return;
      case DVBP_SOLVER_BRUTE: {
        size_t limit = o.brute_force_limit > 0
                           ? static_cast<size_t>(o.brute_force_limit)
                           : dvbp::kDefaultBruteForceLimit;
        *out = new dvbp_packing{
            dvbp::BruteForceOpt(instance->instance, limit).packing};
        return;
      }
      case DVBP_SOLVER_DP: {
        dvbp::DpOptions dp;
        if (o.dp_max_height > 0) {
          dp.max_height = static_cast<size_t>(o.dp_max_height);
        }
        if (o.dp_max_bins > 0) dp.max_bins = o.dp_max_bins;
        *out = new dvbp_packing{
            dvbp::DpMinimumBins(instance->instance, dp).packing};
        return;
      }
    }
    throw dvbp::Error(dvbp::ErrorCode::kInvalidArgument, "unknown solver");
  });
}

dvbp_status dvbp_dp_feasible(const dvbp_instance* instance, int64_t bins,
                             const dvbp_solve_options* options, int* feasible,
                             dvbp_packing** witness) {
  return Guard([&] {
    Require(instance != nullptr && feasible != nullptr, "null argument");
    dvbp::DpOptions dp;
    if (options != nullptr && options->dp_max_height > 0) {
      dp.max_height = static_cast<size_t>(options->dp_max_height);
    }
    if (options != nullptr && options->dp_max_bins > 0) {
      dp.max_bins = options->dp_max_bins;
    }
    dvbp::DpResult result = dvbp::DpFeasible(instance->instance, bins, dp);
    *feasible = result.feasible ? 1 : 0;
    if (witness != nullptr) {
      *witness = result.witness ? new dvbp_packing{std::move(*result.witness)}
                                : nullptr;
    }
  });
}

dvbp_status dvbp_export_ilp(const dvbp_instance* instance, int64_t bins,
                            char** lp, char** sidecar) {
  return Guard([&] {
    Require(instance != nullptr && lp != nullptr, "null argument");
    dvbp::IlpModel model = dvbp::ExportIlp(instance->instance, bins);
    char* lp_text = CopyString(model.lp);
    if (sidecar != nullptr) {
      try {
        *sidecar = CopyString(model.sidecar);
      } catch (...) {
        std::free(lp_text);
        throw;
      }
    }
    *lp = lp_text;
  });
}

dvbp_status dvbp_ingest_trace(const char* trace_path, const char* schema_path,
                              dvbp_instance** out, char** report) {
  return Guard([&] {
    Require(trace_path != nullptr && schema_path != nullptr && out != nullptr,
            "null argument");
    dvbp::TraceSchema schema = dvbp::LoadTraceSchema(schema_path);
    std::ifstream input(trace_path, std::ios::binary);
    if (!input) {
      throw dvbp::Error(dvbp::ErrorCode::kIo,
                        std::string("cannot open ") + trace_path);
    }
    dvbp::IngestResult result = dvbp::IngestTrace(input, schema);
    char* report_text =
        report != nullptr ? CopyString(result.report.ToJson()) : nullptr;
    try {
      *out = new dvbp_instance{std::move(result.instance),
                               result.report.dropped_empty};
    } catch (...) {
      std::free(report_text);
      throw;
    }
    if (report != nullptr) *report = report_text;
  });
}

dvbp_status dvbp_sweep(const dvbp_instance* instance, const char* from,
                       const char* to, const char* step,
                       dvbp_priority_mode mode,
                       const dvbp_reduce_options* options, unsigned threads,
                       int timing, char** csv) {
  return Guard([&] {
    Require(instance != nullptr && csv != nullptr, "null argument");
    dvbp::SweepOptions sweep;
    if (from != nullptr) sweep.from = dvbp::Rational::Parse(from);
    if (to != nullptr) sweep.to = dvbp::Rational::Parse(to);
    if (step != nullptr) sweep.step = dvbp::Rational::Parse(step);
    sweep.mode = ToMode(mode);
    sweep.reduction = ToReductionOptions(options);
    sweep.threads = threads;
    sweep.timing = timing != 0;
    *csv = CopyString(
        dvbp::SweepToCsv(dvbp::RunSweep(instance->instance, sweep),
                         sweep.timing));
  });
}

}  // extern "C"
