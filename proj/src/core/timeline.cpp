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

#include "core/timeline.h"

#include <algorithm>
#include <string>

#include "core/error.h"

namespace dvbp {
namespace {

enum class EventKind : uint8_t { kEnd = 0, kStart = 1 };

struct Event {
  TimePoint time;
  EventKind kind;
  size_t request;
};

}  // namespace

std::optional<TimePoint> TimeMap::Map(TimePoint original) const {
  auto it = std::lower_bound(
      pairs_.begin(), pairs_.end(), original,
      [](const std::pair<TimePoint, TimePoint>& p, TimePoint v) {
        return p.first < v;
      });
  if (it == pairs_.end() || it->first != original) return std::nullopt;
  return it->second;
}

std::optional<TimePoint> TimeMap::FirstOriginal(TimePoint compressed) const {
  auto it = std::lower_bound(
      pairs_.begin(), pairs_.end(), compressed,
      [](const std::pair<TimePoint, TimePoint>& p, TimePoint v) {
        return p.second < v;
      });
  if (it == pairs_.end() || it->second != compressed) return std::nullopt;
  return it->first;
}

CompressedInstance CompressTime(const Instance& instance) {
  const size_t n = instance.size();
  std::vector<Event> events;
  events.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) {
    const Request& r = instance.request(i);
    events.push_back({r.start, EventKind::kStart, i});
    events.push_back({r.end, EventKind::kEnd, i});
  }
  // Ends precede starts at equal coordinates (half-open intervals).
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.request < b.request;
  });

  std::vector<Request> requests(instance.requests().begin(),
                                instance.requests().end());
  std::vector<std::pair<TimePoint, TimePoint>> pairs;
  TimePoint clock = 1;
  bool start_at_clock = false;
  for (const Event& e : events) {
    if (e.kind == EventKind::kStart) {
      requests[e.request].start = clock;
      start_at_clock = true;
    } else {
      // An end must lie strictly after every start seen so far; a start may
      // share the coordinate of an earlier end.
      if (start_at_clock) {
        ++clock;
        start_at_clock = false;
      }
      requests[e.request].end = clock;
    }
    if (pairs.empty() || pairs.back().first != e.time) {
      pairs.emplace_back(e.time, clock);
    }
  }
  const TimePoint horizon = events.empty() ? 0 : clock;
  return CompressedInstance{
      Instance(Instance::TrustedTag{}, instance.capacity(),
               std::move(requests)),
      TimeMap(std::move(pairs), horizon),
  };
}

IntersectionMatrix ComputeIntersectionMatrix(const Instance& instance,
                                             size_t cap) {
  const size_t n = instance.size();
  if (n > cap) {
    throw Error(ErrorCode::kRefused,
                "intersection matrix refused for n=" + std::to_string(n) +
                    " (cap " + std::to_string(cap) + ")");
  }
  IntersectionMatrix matrix(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      bool hit = Intersects(instance.request(i), instance.request(j));
      matrix.set(i, j, hit);
      matrix.set(j, i, hit);
    }
  }
  return matrix;
}

}  // namespace dvbp
