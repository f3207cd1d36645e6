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

#include <algorithm>
#include <optional>
#include <utility>

#include <nlohmann/json.hpp>

#include "core/error.h"
#include "core/instance_io.h"
#include "core/timeline.h"

namespace dvbp {
namespace {

using Json = nlohmann::ordered_json;

Json RationalJson(const Rational& r) {
  Json j;
  j["num"] = r.num();
  j["den"] = r.den();
  return j;
}

Rational RationalFromJson(const nlohmann::json& j) {
  return Rational(j.at("num").get<int64_t>(), j.at("den").get<int64_t>());
}

Json OptionalRationalJson(const std::optional<Rational>& r) {
  return r ? RationalJson(*r) : Json(nullptr);
}

std::optional<Rational> OptionalRationalFromJson(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return RationalFromJson(j);
}

}  // namespace

std::string_view UpperBoundVariantName(UpperBoundVariant variant) {
  return variant == UpperBoundVariant::kScaled ? "scaled" : "as-written";
}

UpperBoundVariant ParseUpperBoundVariant(std::string_view name) {
  if (name == "as-written") return UpperBoundVariant::kAsWritten;
  if (name == "scaled") return UpperBoundVariant::kScaled;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown upper bound variant '" + std::string(name) +
                  "' (expected as-written or scaled)");
}

ReductionResult Reduce(const Instance& instance, const Rational& epsilon,
                       PriorityMode mode, const ReductionOptions& options) {
  if (epsilon < Rational(0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be non-negative");
  }
  ReductionCertificate cert;
  cert.epsilon = epsilon;
  cert.mode = mode;
  cert.upper_bound_variant = options.upper_bound_variant;
  cert.recompress = options.recompress;
  cert.original_n = static_cast<int64_t>(instance.size());

  Instance current = CompressTime(instance).instance;
  cert.lower_bound = LowerBound(current);
  cert.deletion_budget = FloorOfProduct(epsilon, cert.lower_bound);
  const int64_t removable = UpperBoundRemovable(
      current, cert.deletion_budget, options.upper_bound_variant);

  std::vector<size_t> all;
  for (int64_t bin = 0; bin < cert.deletion_budget && !current.empty();
       ++bin) {
    all.resize(current.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<size_t> packed = GreedyPackBinIndices(current, all, mode);
    if (packed.empty()) break;

    std::vector<RequestId> deleted;
    deleted.reserve(packed.size());
    std::vector<char> gone(current.size(), 0);
    for (size_t i : packed) {
      deleted.push_back(current.request(i).id);
      gone[i] = 1;
    }
    std::sort(deleted.begin(), deleted.end());
    cert.deletion_bins.push_back(std::move(deleted));

    std::vector<size_t> keep;
    keep.reserve(current.size() - packed.size());
    for (size_t i = 0; i < current.size(); ++i) {
      if (!gone[i]) keep.push_back(i);
    }
    current = current.Subset(keep);
    if (options.recompress) current = CompressTime(current).instance;
  }
  if (!options.recompress) current = CompressTime(current).instance;

  for (const Request& r : current.requests()) {
    cert.surviving_ids.push_back(r.id);
  }
  std::sort(cert.surviving_ids.begin(), cert.surviving_ids.end());
  cert.reduced_instance_ref = Fingerprint(current);

  const auto n = static_cast<int64_t>(instance.size());
  const auto n_prime = static_cast<int64_t>(current.size());
  Utilization u = ComputeUtilization(n, n_prime, removable);
  cert.metrics = Metrics{
      .lower_bound = cert.lower_bound,
      .upper_bound = removable,
      .removed_utilization = u.removed,
      .remaining_utilization = u.remaining,
      .deletion_budget = cert.deletion_budget,
      .n = n,
      .n_prime = n_prime,
  };
  return ReductionResult{std::move(current), std::move(cert)};
}

Packing LiftSolution(const ReductionCertificate& certificate,
                     const Packing& reduced_packing,
                     const Instance& original) {
  if (certificate.original_n != static_cast<int64_t>(original.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "certificate was issued for an instance with " +
                    std::to_string(certificate.original_n) + " requests, got " +
                    std::to_string(original.size()));
  }
  if (reduced_packing.partial) {
    throw Error(ErrorCode::kInfeasible,
                "cannot lift a partial packing of the reduced instance");
  }

  // 0 = surviving, otherwise 1-based deletion bin.
  std::vector<int64_t> deletion_bin(original.size(), 0);
  int64_t nonempty = 0;
  for (const auto& bin : certificate.deletion_bins) {
    if (bin.empty()) continue;
    ++nonempty;
    for (RequestId id : bin) {
      auto index = original.IndexOf(id);
      if (!index || deletion_bin[*index] != 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "certificate lists unknown or repeated request " +
                        std::to_string(id));
      }
      deletion_bin[*index] = nonempty;
    }
  }

  std::vector<size_t> surviving;
  for (size_t i = 0; i < original.size(); ++i) {
    if (deletion_bin[i] == 0) surviving.push_back(i);
  }
  const Instance reduced = original.Subset(surviving);
  for (const auto& [id, bin] : reduced_packing.assignment) {
    if (!reduced.Contains(id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "request " + std::to_string(id) +
                      " is not part of the reduced instance");
    }
  }
  VerificationReport check = VerifyPacking(reduced, reduced_packing);
  if (!check.feasible) {
    throw Error(ErrorCode::kInfeasible,
                "reduced packing is incomplete or infeasible: " +
                    check.Describe());
  }

  Packing lifted;
  lifted.bins = reduced_packing.bins + nonempty;
  lifted.assignment = reduced_packing.assignment;
  for (size_t i = 0; i < original.size(); ++i) {
    if (deletion_bin[i] != 0) {
      lifted.assignment.emplace_back(original.request(i).id,
                                     reduced_packing.bins + deletion_bin[i]);
    }
  }
  std::sort(lifted.assignment.begin(), lifted.assignment.end());
  VerificationReport final_check = VerifyPacking(original, lifted);
  if (!final_check.feasible) {
    throw Error(ErrorCode::kInfeasible,
                "lifted packing is infeasible; the certificate does not match "
                "the instance: " +
                    final_check.Describe());
  }
  return lifted;
}

std::string CertificateToJson(const ReductionCertificate& c) {
  Json metrics;
  metrics["L"] = RationalJson(c.metrics.lower_bound);
  metrics["k_del"] = c.metrics.deletion_budget;
  metrics["U"] = c.metrics.upper_bound;
  metrics["R"] = OptionalRationalJson(c.metrics.removed_utilization);
  metrics["K"] = OptionalRationalJson(c.metrics.remaining_utilization);
  metrics["n"] = c.metrics.n;
  metrics["n_prime"] = c.metrics.n_prime;

  std::vector<std::pair<std::string, Json>> fields = {
      {"epsilon", RationalJson(c.epsilon)},
      {"L", RationalJson(c.lower_bound)},
      {"k_del", c.deletion_budget},
      {"priority_mode", std::string(PriorityModeName(c.mode))},
      {"upper_bound_variant",
       std::string(UpperBoundVariantName(c.upper_bound_variant))},
      {"recompress", c.recompress},
      {"original_n", c.original_n},
      {"reduced_instance_ref", c.reduced_instance_ref},
      {"metrics", metrics},
      {"surviving_ids", c.surviving_ids},
  };
  std::string out = "{\n";
  for (const auto& [key, value] : fields) {
    out += "  \"" + key + "\": " + value.dump() + ",\n";
  }
  out += "  \"deletion_bins\": [";
  for (size_t b = 0; b < c.deletion_bins.size(); ++b) {
    out += b == 0 ? "\n    " : ",\n    ";
    out += Json(c.deletion_bins[b]).dump();
  }
  out += c.deletion_bins.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

ReductionCertificate ParseCertificate(std::string_view json) {
  ReductionCertificate c;
  try {
    const nlohmann::json doc = nlohmann::json::parse(json);
    c.epsilon = RationalFromJson(doc.at("epsilon"));
    c.lower_bound = RationalFromJson(doc.at("L"));
    c.deletion_budget = doc.at("k_del").get<int64_t>();
    c.mode = ParsePriorityMode(doc.at("priority_mode").get<std::string>());
    c.upper_bound_variant = ParseUpperBoundVariant(
        doc.at("upper_bound_variant").get<std::string>());
    c.recompress = doc.at("recompress").get<bool>();
    c.original_n = doc.at("original_n").get<int64_t>();
    c.reduced_instance_ref = doc.at("reduced_instance_ref").get<std::string>();
    c.surviving_ids = doc.at("surviving_ids").get<std::vector<RequestId>>();
    c.deletion_bins =
        doc.at("deletion_bins").get<std::vector<std::vector<RequestId>>>();
    const auto& m = doc.at("metrics");
    c.metrics.lower_bound = RationalFromJson(m.at("L"));
    c.metrics.deletion_budget = m.at("k_del").get<int64_t>();
    c.metrics.upper_bound = m.at("U").get<int64_t>();
    c.metrics.removed_utilization = OptionalRationalFromJson(m.at("R"));
    c.metrics.remaining_utilization = OptionalRationalFromJson(m.at("K"));
    c.metrics.n = m.at("n").get<int64_t>();
    c.metrics.n_prime = m.at("n_prime").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed certificate JSON: ") + e.what());
  }
  if (static_cast<int64_t>(c.deletion_bins.size()) > c.deletion_budget) {
    throw Error(ErrorCode::kValidation,
                "certificate holds more deletion bins than its budget");
  }
  return c;
}

}  // namespace dvbp
