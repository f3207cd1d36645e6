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

// (1+eps)-approximate reduction: greedily fill floor(eps * L) bins, delete
// their requests, and keep a certificate that lets any packing of the
// reduced instance be lifted back to the original one.

#ifndef DVBP_CORE_REDUCTION_H_
#define DVBP_CORE_REDUCTION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/bounds.h"
#include "core/model.h"
#include "core/packing.h"
#include "core/rational.h"

namespace dvbp {

struct ReductionOptions {
  // Re-run time compression after every deleted bin.
  bool recompress = true;
  UpperBoundVariant upper_bound_variant = UpperBoundVariant::kAsWritten;
};

struct ReductionCertificate {
  Rational epsilon;
  Rational lower_bound;
  int64_t deletion_budget = 0;  // floor(epsilon * lower_bound)
  PriorityMode mode = PriorityMode::kF2;
  UpperBoundVariant upper_bound_variant = UpperBoundVariant::kAsWritten;
  bool recompress = true;
  int64_t original_n = 0;
  std::string reduced_instance_ref;
  // Original request ids; only nonempty bins are recorded.
  std::vector<std::vector<RequestId>> deletion_bins;
  std::vector<RequestId> surviving_ids;  // ascending
  Metrics metrics;

  friend bool operator==(const ReductionCertificate&,
                         const ReductionCertificate&) = default;
};

struct ReductionResult {
  Instance reduced;  // time-compressed
  ReductionCertificate certificate;
};

ReductionResult Reduce(const Instance& instance, const Rational& epsilon,
                       PriorityMode mode, const ReductionOptions& options = {});

// Rebuilds a packing of `original` from a complete, feasible packing of the
// reduced instance: reduced bins keep their numbers and each deletion bin
// becomes one extra bin. Infeasible or incomplete input is rejected.
Packing LiftSolution(const ReductionCertificate& certificate,
                     const Packing& reduced_packing, const Instance& original);

std::string CertificateToJson(const ReductionCertificate& certificate);
ReductionCertificate ParseCertificate(std::string_view json);

std::string_view UpperBoundVariantName(UpperBoundVariant variant);
UpperBoundVariant ParseUpperBoundVariant(std::string_view name);

}  // namespace dvbp

#endif  // DVBP_CORE_REDUCTION_H_
