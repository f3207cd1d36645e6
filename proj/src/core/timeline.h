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

// Time compression: remaps event coordinates onto {1, ..., T'} with T'
// minimal, keeping exactly the same pairs of intersecting requests.

#ifndef DVBP_CORE_TIMELINE_H_
#define DVBP_CORE_TIMELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core/model.h"

namespace dvbp {

// Monotone map from original event coordinates to compressed ones.
class TimeMap {
 public:
  TimeMap() = default;
  TimeMap(std::vector<std::pair<TimePoint, TimePoint>> pairs,
          TimePoint horizon)
      : pairs_(std::move(pairs)), horizon_(horizon) {}

  // Sorted by original coordinate.
  const std::vector<std::pair<TimePoint, TimePoint>>& pairs() const {
    return pairs_;
  }
  TimePoint horizon() const { return horizon_; }

  std::optional<TimePoint> Map(TimePoint original) const;
  // Earliest original coordinate mapped to `compressed`.
  std::optional<TimePoint> FirstOriginal(TimePoint compressed) const;

 private:
  std::vector<std::pair<TimePoint, TimePoint>> pairs_;
  TimePoint horizon_ = 0;
};

struct CompressedInstance {
  Instance instance;
  TimeMap map;
};

CompressedInstance CompressTime(const Instance& instance);

// Row-major symmetric n x n matrix; entry (i, j) is set iff requests i and j
// (instance order) are active at a common instant. The diagonal is set.
class IntersectionMatrix {
 public:
  explicit IntersectionMatrix(size_t n) : n_(n), cells_(n * n, 0) {}

  size_t size() const { return n_; }
  bool at(size_t i, size_t j) const { return cells_[i * n_ + j] != 0; }
  void set(size_t i, size_t j, bool value) {
    cells_[i * n_ + j] = value ? 1 : 0;
  }

  friend bool operator==(const IntersectionMatrix&,
                         const IntersectionMatrix&) = default;

 private:
  size_t n_;
  std::vector<uint8_t> cells_;
};

inline constexpr size_t kDefaultIntersectionCap = 10'000;

// Refuses (ErrorCode::kRefused) when n exceeds `cap`.
IntersectionMatrix ComputeIntersectionMatrix(
    const Instance& instance, size_t cap = kDefaultIntersectionCap);

}  // namespace dvbp

#endif  // DVBP_CORE_TIMELINE_H_
