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

// Exact methods for small instances and ILP export for external solvers.

#ifndef DVBP_CORE_EXACT_H_
#define DVBP_CORE_EXACT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "core/model.h"
#include "core/packing.h"

namespace dvbp {

inline constexpr size_t kDefaultBruteForceLimit = 12;

struct ExactSolution {
  int64_t bins = 0;
  Packing packing;
};

// Exhaustive search over assignments; request i may only open the bin right
// after the highest bin used by requests before it. Refuses n > limit.
ExactSolution BruteForceOpt(const Instance& instance,
                            size_t limit = kDefaultBruteForceLimit);

struct DpOptions {
  size_t max_height = 10;
  int64_t max_bins = 4;
};

struct DpResult {
  bool feasible = false;
  std::optional<Packing> witness;
};

// Decides whether the instance fits into `bins` bins with a table over all
// labelings of the active request set at each instant, evaluated backward in
// time. Refuses when the height or the bin count exceed the guard rails.
DpResult DpFeasible(const Instance& instance, int64_t bins,
                    const DpOptions& options = {});

// Smallest feasible bin count found by DpFeasible, trying 0, 1, ..., up to
// options.max_bins.
ExactSolution DpMinimumBins(const Instance& instance,
                            const DpOptions& options = {});

struct IlpModel {
  std::string lp;       // LP file format
  std::string sidecar;  // JSON: variable name -> (type, bin)
  size_t integer_variables = 0;
  size_t binary_variables = 0;
  size_t assign_rows = 0;
  size_t activate_rows = 0;
  size_t resource_rows = 0;
};

// Bin-indexed model over request types: x_i_j counts type-i requests in bin
// j, y_j marks bin j as used.
IlpModel ExportIlp(const Instance& instance, int64_t bins);

}  // namespace dvbp

#endif  // DVBP_CORE_EXACT_H_
