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

#include "core/model.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "core/error.h"

namespace dvbp {
namespace {

constexpr size_t kMaxReportedErrors = 20;

// Indices of requests sorted by (demand, start, end, id).
std::vector<size_t> SortedByTypeKey(const Instance& instance) {
  std::vector<size_t> order(instance.size());
  std::iota(order.begin(), order.end(), size_t{0});
  auto requests = instance.requests();
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Request& x = requests[a];
    const Request& y = requests[b];
    if (auto c = x.demand <=> y.demand; c != 0) return c < 0;
    if (x.start != y.start) return x.start < y.start;
    if (x.end != y.end) return x.end < y.end;
    return x.id < y.id;
  });
  return order;
}

bool SameType(const Request& a, const Request& b) {
  return a.start == b.start && a.end == b.end && a.demand == b.demand;
}

}  // namespace

bool ResourceVector::AllZero() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](int64_t v) { return v == 0; });
}

bool ResourceVector::FitsWithin(const ResourceVector& capacity) const {
  for (size_t i = 0; i < components_.size(); ++i) {
    if (components_[i] > capacity.components_[i]) return false;
  }
  return true;
}

std::string ToString(const ResourceVector& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.dimension(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

Instance::Instance(TrustedTag, ResourceVector capacity,
                   std::vector<Request> requests)
    : capacity_(std::move(capacity)), requests_(std::move(requests)) {
  id_index_.reserve(requests_.size());
  for (size_t i = 0; i < requests_.size(); ++i) {
    id_index_.emplace_back(requests_[i].id, i);
  }
  std::sort(id_index_.begin(), id_index_.end());
}

TimePoint Instance::Horizon() const {
  TimePoint horizon = 0;
  for (const Request& r : requests_) horizon = std::max(horizon, r.end);
  return horizon;
}

std::optional<size_t> Instance::IndexOf(RequestId id) const {
  auto it = std::lower_bound(
      id_index_.begin(), id_index_.end(), id,
      [](const std::pair<RequestId, size_t>& p, RequestId v) {
        return p.first < v;
      });
  if (it == id_index_.end() || it->first != id) return std::nullopt;
  return it->second;
}

Instance Instance::Subset(std::span<const size_t> indices) const {
  std::vector<Request> subset;
  subset.reserve(indices.size());
  for (size_t i : indices) subset.push_back(requests_[i]);
  return Instance(TrustedTag{}, capacity_, std::move(subset));
}

ValidationResult ValidateInstance(const RawInstance& raw,
                                  const ValidateOptions& options) {
  ValidationResult result;
  auto report = [&result](std::string message) {
    result.errors.push_back(std::move(message));
  };

  const size_t d = raw.capacity.size();
  if (d == 0) report("capacity must have at least one component");
  for (size_t j = 0; j < d; ++j) {
    if (raw.capacity[j] < 0) {
      report("capacity component " + std::to_string(j + 1) + " is negative");
    }
  }

  std::vector<Request> requests;
  requests.reserve(raw.requests.size());
  for (size_t pos = 0; pos < raw.requests.size(); ++pos) {
    const RawRequest& r = raw.requests[pos];
    const std::string where = "request " + std::to_string(pos + 1) + ": ";
    bool ok = true;
    if (r.demand.size() != d) {
      report(where + "dimension mismatch (expected " + std::to_string(d) +
             ", got " + std::to_string(r.demand.size()) + ")");
      continue;
    }
    for (size_t j = 0; j < d; ++j) {
      if (r.demand[j] < 0) {
        report(where + "negative demand in component " + std::to_string(j + 1));
        ok = false;
      } else if (r.demand[j] > raw.capacity[j]) {
        report(where + "demand exceeds capacity in component " +
               std::to_string(j + 1));
        ok = false;
      }
    }
    if (r.start < 0 || r.end < 0) {
      report(where + "negative time value");
      ok = false;
    }
    if (r.start == r.end && options.drop_empty) {
      ++result.dropped_empty;
      continue;
    }
    if (r.start >= r.end) {
      report(where + "start " + std::to_string(r.start) +
             " is not before end " + std::to_string(r.end));
      ok = false;
    }
    if (!ok) continue;
    requests.push_back(Request{
        .id = r.id.value_or(static_cast<RequestId>(pos + 1)),
        .demand = ResourceVector(r.demand),
        .start = r.start,
        .end = r.end,
    });
  }

  std::vector<RequestId> ids;
  ids.reserve(requests.size());
  for (const Request& r : requests) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  for (size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] == ids[i - 1] && (i < 2 || ids[i - 2] != ids[i])) {
      report("duplicate request id " + std::to_string(ids[i]));
    }
  }

  if (result.errors.empty()) {
    result.instance.emplace(Instance::TrustedTag{},
                            ResourceVector(raw.capacity), std::move(requests));
  }
  return result;
}

Instance ValidateOrThrow(const RawInstance& raw,
                         const ValidateOptions& options) {
  ValidationResult result = ValidateInstance(raw, options);
  if (result.ok()) return std::move(*result.instance);
  std::ostringstream message;
  message << "invalid instance: ";
  for (size_t i = 0; i < result.errors.size() && i < kMaxReportedErrors; ++i) {
    if (i > 0) message << "; ";
    message << result.errors[i];
  }
  if (result.errors.size() > kMaxReportedErrors) {
    message << "; ... (" << result.errors.size() - kMaxReportedErrors
            << " more)";
  }
  throw Error(ErrorCode::kValidation, message.str());
}

RawInstance ToRaw(const Instance& instance) {
  RawInstance raw;
  auto cap = instance.capacity().components();
  raw.capacity.assign(cap.begin(), cap.end());
  raw.requests.reserve(instance.size());
  for (const Request& r : instance.requests()) {
    auto demand = r.demand.components();
    raw.requests.push_back(RawRequest{
        .id = r.id,
        .demand = std::vector<int64_t>(demand.begin(), demand.end()),
        .start = r.start,
        .end = r.end,
    });
  }
  return raw;
}

InstanceStats ComputeStats(const Instance& instance) {
  InstanceStats stats;
  stats.n = instance.size();
  stats.d = instance.dimension();
  stats.T = instance.Horizon();

  // (time, +1 start / -1 end); ends sort first at equal times.
  std::vector<std::pair<TimePoint, int>> events;
  events.reserve(2 * instance.size());
  for (const Request& r : instance.requests()) {
    events.emplace_back(r.start, +1);
    events.emplace_back(r.end, -1);
  }
  std::sort(events.begin(), events.end());
  size_t active = 0;
  for (size_t i = 0; i < events.size();) {
    const TimePoint t = events[i].first;
    for (; i < events.size() && events[i].first == t; ++i) {
      active += events[i].second;
    }
    stats.h = std::max(stats.h, active);
    if (i < events.size()) {
      const TimePoint next = events[i].first;
      if (!stats.active_profile.empty() &&
          stats.active_profile.back().to == t &&
          stats.active_profile.back().count == active) {
        stats.active_profile.back().to = next;
      } else {
        stats.active_profile.push_back({t, next, active});
      }
    }
  }

  std::vector<size_t> order = SortedByTypeKey(instance);
  auto requests = instance.requests();
  for (size_t i = 0; i < order.size(); ++i) {
    const Request& r = requests[order[i]];
    if (i == 0 || !(r.demand == requests[order[i - 1]].demand)) ++stats.phi;
    if (i == 0 || !SameType(r, requests[order[i - 1]])) ++stats.tau;
  }
  return stats;
}

TypeTable GroupTypes(const Instance& instance) {
  TypeTable table;
  std::vector<size_t> order = SortedByTypeKey(instance);
  auto requests = instance.requests();
  for (size_t i = 0; i < order.size(); ++i) {
    const Request& r = requests[order[i]];
    if (i == 0 || !SameType(r, requests[order[i - 1]])) {
      table.entries.push_back(TypeEntry{
          .key = TypeKey{r.demand, r.start, r.end},
          .multiplicity = 0,
          .members = {},
      });
    }
    TypeEntry& entry = table.entries.back();
    ++entry.multiplicity;
    entry.members.push_back(r.id);
  }
  return table;
}

size_t CountFlavors(const Instance& instance) {
  std::vector<const ResourceVector*> demands;
  demands.reserve(instance.size());
  for (const Request& r : instance.requests()) demands.push_back(&r.demand);
  std::sort(demands.begin(), demands.end(),
            [](const ResourceVector* a, const ResourceVector* b) {
              return *a < *b;
            });
  size_t count = 0;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (i == 0 || !(*demands[i] == *demands[i - 1])) ++count;
  }
  return count;
}

}  // namespace dvbp
