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

#ifndef DVBP_CORE_BOUNDS_H_
#define DVBP_CORE_BOUNDS_H_

#include <cstdint>
#include <optional>

#include "core/model.h"
#include "core/rational.h"

namespace dvbp {

// Peak, over instants and dimensions, of the total active demand divided by
// the capacity. Any packing needs at least ceil(L) bins.
Rational LowerBound(const Instance& instance);

enum class UpperBoundVariant {
  // Prefix budget b_j for every k.
  kAsWritten,
  // Prefix budget k * b_j.
  kScaled,
};

// Upper estimate of how many requests fit into `bins` bins, computed per
// dimension from the type table and capped at n.
int64_t UpperBoundRemovable(const Instance& instance, int64_t bins,
                            UpperBoundVariant variant =
                                UpperBoundVariant::kAsWritten);

struct Utilization {
  std::optional<Rational> removed;   // R = (n - n') / U
  std::optional<Rational> remaining; // K = n' / (n - U)
};

Utilization ComputeUtilization(int64_t n, int64_t n_prime, int64_t removable);

struct Metrics {
  Rational lower_bound;
  int64_t upper_bound = 0;
  std::optional<Rational> removed_utilization;
  std::optional<Rational> remaining_utilization;
  int64_t deletion_budget = 0;
  int64_t n = 0;
  int64_t n_prime = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

}  // namespace dvbp

#endif  // DVBP_CORE_BOUNDS_H_
