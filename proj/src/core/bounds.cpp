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

#include "core/bounds.h"

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "core/error.h"

namespace dvbp {

Rational LowerBound(const Instance& instance) {
  const size_t d = instance.dimension();
  std::vector<std::pair<TimePoint, size_t>> starts;
  std::vector<std::pair<TimePoint, size_t>> ends;
  starts.reserve(instance.size());
  ends.reserve(instance.size());
  for (size_t i = 0; i < instance.size(); ++i) {
    starts.emplace_back(instance.request(i).start, i);
    ends.emplace_back(instance.request(i).end, i);
  }
  std::sort(starts.begin(), starts.end());
  std::sort(ends.begin(), ends.end());

  std::vector<int64_t> load(d, 0);
  std::vector<int64_t> peak(d, 0);
  size_t e = 0;
  for (size_t s = 0; s < starts.size();) {
    const TimePoint t = starts[s].first;
    for (; e < ends.size() && ends[e].first <= t; ++e) {
      const ResourceVector& a = instance.request(ends[e].second).demand;
      for (size_t j = 0; j < d; ++j) load[j] -= a[j];
    }
    for (; s < starts.size() && starts[s].first == t; ++s) {
      const ResourceVector& a = instance.request(starts[s].second).demand;
      for (size_t j = 0; j < d; ++j) load[j] += a[j];
    }
    for (size_t j = 0; j < d; ++j) peak[j] = std::max(peak[j], load[j]);
  }

  Rational best(0);
  for (size_t j = 0; j < d; ++j) {
    const int64_t b = instance.capacity()[j];
    // Validation forces zero demand wherever the capacity is zero.
    if (b == 0) continue;
    best = std::max(best, Rational(peak[j], b));
  }
  return best;
}

int64_t UpperBoundRemovable(const Instance& instance, int64_t bins,
                            UpperBoundVariant variant) {
  if (bins < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bin count must be non-negative");
  }
  if (bins == 0 || instance.empty()) return 0;
  const size_t d = instance.dimension();
  const auto n = static_cast<int64_t>(instance.size());
  const ResourceVector& b = instance.capacity();

  // S[j] as (value, copies) runs.
  std::vector<std::vector<std::pair<int64_t, int64_t>>> lists(d);
  for (const TypeEntry& type : GroupTypes(instance).entries) {
    const ResourceVector& a = type.key.demand;
    int64_t copies = static_cast<int64_t>(type.multiplicity);
    for (size_t j = 0; j < d; ++j) {
      if (a[j] == 0) continue;
      const int64_t per_bin = b[j] / a[j];
      // per_bin >= 1 since a <= b; saturate instead of overflowing.
      const int64_t fit = per_bin > std::numeric_limits<int64_t>::max() / bins
                              ? std::numeric_limits<int64_t>::max()
                              : per_bin * bins;
      copies = std::min(copies, fit);
    }
    for (size_t j = 0; j < d; ++j) lists[j].emplace_back(a[j], copies);
  }

  int64_t result = n;
  for (size_t j = 0; j < d; ++j) {
    auto& list = lists[j];
    std::sort(list.begin(), list.end());
    __int128 budget = b[j];
    if (variant == UpperBoundVariant::kScaled) budget *= bins;
    int64_t taken = 0;
    for (const auto& [value, copies] : list) {
      if (value == 0) {
        taken += copies;
        continue;
      }
      const __int128 affordable = budget / value;
      if (affordable < copies) {
        taken += static_cast<int64_t>(affordable);
        break;
      }
      taken += copies;
      budget -= static_cast<__int128>(value) * copies;
    }
    result = std::min(result, taken);
  }
  return result;
}

Utilization ComputeUtilization(int64_t n, int64_t n_prime, int64_t removable) {
  if (n_prime < 0 || n_prime > n) {
    throw Error(ErrorCode::kInvalidArgument, "expected 0 <= n' <= n");
  }
  Utilization u;
  if (removable != 0) u.removed = Rational(n - n_prime, removable);
  if (removable < n) u.remaining = Rational(n_prime, n - removable);
  return u;
}

}  // namespace dvbp
