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

// Greedy single-bin packing, request priorities, packing verification and a
// baseline multi-bin solver built from repeated greedy rounds.

#ifndef DVBP_CORE_PACKING_H_
#define DVBP_CORE_PACKING_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/model.h"
#include "core/rational.h"

namespace dvbp {

enum class PriorityMode { kAlpha, kF1, kF2 };

std::string_view PriorityModeName(PriorityMode mode);
// Accepts "alpha", "f1", "f2".
PriorityMode ParsePriorityMode(std::string_view name);

// Exact priority value. Requests with all-zero demand get an infinite
// priority so they are always considered first.
struct Priority {
  bool infinite = false;
  Rational value;

  friend bool operator==(const Priority&, const Priority&) = default;
  friend std::strong_ordering operator<=>(const Priority& a,
                                          const Priority& b) {
    if (a.infinite != b.infinite) {
      return a.infinite ? std::strong_ordering::greater
                        : std::strong_ordering::less;
    }
    if (a.infinite) return std::strong_ordering::equal;
    return a.value <=> b.value;
  }
};

// alpha = min over j with a_j > 0 of floor(b_j / a_j);
// f1 = alpha + 1 / (2 * span); f2 = alpha * horizon / span.
Priority ComputePriority(const Request& request,
                         const ResourceVector& capacity, TimePoint horizon,
                         PriorityMode mode);

// Remaining capacity of a single bin over time. Coordinates are compressed
// to the distinct event points of the requests the timeline was built for,
// so the cost does not depend on the raw time range.
class ResidualTimeline {
 public:
  ResidualTimeline(const ResourceVector& capacity,
                   std::vector<TimePoint> coordinates);

  // Number of copies of `request` (0..limit) that still fit.
  int64_t CopiesThatFit(const Request& request, int64_t limit) const;
  void Place(const Request& request, int64_t copies);
  // Component-wise minimum residual over [start, end).
  std::vector<int64_t> MinResidual(TimePoint start, TimePoint end) const;

 private:
  std::pair<size_t, size_t> SegmentRange(const Request& request) const;
  void Push(size_t node) const;
  void Query(size_t node, size_t lo, size_t hi, size_t from, size_t to,
             std::vector<int64_t>& out) const;
  void Update(size_t node, size_t lo, size_t hi, size_t from, size_t to,
              std::span<const int64_t> delta);

  size_t dims_;
  std::vector<TimePoint> coordinates_;
  size_t segments_;
  // Segment tree over elementary segments with pending additions pushed
  // down lazily, also during queries.
  mutable std::vector<int64_t> min_;
  mutable std::vector<int64_t> lazy_;
  mutable std::vector<int64_t> scratch_;
};

// Packs the candidates, in non-increasing priority with ties broken by
// ascending id, into one empty bin. Returns the packed ids in ascending
// order. Candidate ids must belong to `instance`.
std::vector<RequestId> GreedyPackBin(const Instance& instance,
                                     std::span<const RequestId> candidates,
                                     PriorityMode mode);

// Index-based form used by the reduction; returns ascending indices.
std::vector<size_t> GreedyPackBinIndices(const Instance& instance,
                                         std::span<const size_t> candidates,
                                         PriorityMode mode);

// Assignment of request ids to bins 1..bins.
struct Packing {
  std::vector<std::pair<RequestId, int64_t>> assignment;  // sorted by id
  int64_t bins = 0;
  bool partial = false;

  std::optional<int64_t> BinOf(RequestId id) const;
  // Sorts by id and sets bins to the largest bin index used.
  void Normalize();

  friend bool operator==(const Packing&, const Packing&) = default;
};

struct Violation {
  int64_t bin = 0;
  TimePoint time = 0;
  size_t dimension = 0;  // 1-based
  int64_t load = 0;
  int64_t capacity = 0;
};

struct VerificationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  std::vector<RequestId> unassigned;

  std::string Describe() const;
};

// Checks every bin's load against the capacity at every instant. Unknown or
// duplicated ids and out-of-range bins raise ErrorCode::kInvalidArgument.
VerificationReport VerifyPacking(const Instance& instance,
                                 const Packing& packing);

// Opens one bin per round and fills it with GreedyPackBin until every
// request is placed.
Packing HeuristicSolve(const Instance& instance, PriorityMode mode);

std::string PackingToCsv(const Packing& packing);
std::string PackingToJson(const Packing& packing);
// Detects CSV or JSON from the first non-blank character.
Packing ParsePacking(std::string_view text);

}  // namespace dvbp

#endif  // DVBP_CORE_PACKING_H_
