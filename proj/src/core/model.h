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

// Canonical representation of a dynamic vector bin packing instance: a bin
// capacity vector shared by all bins and a list of requests, each with a
// demand vector and a half-open activity interval [start, end).

#ifndef DVBP_CORE_MODEL_H_
#define DVBP_CORE_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dvbp {

using TimePoint = int64_t;
using RequestId = int64_t;

class ResourceVector {
 public:
  ResourceVector() = default;
  explicit ResourceVector(std::vector<int64_t> components)
      : components_(std::move(components)) {}
  ResourceVector(std::initializer_list<int64_t> components)
      : components_(components) {}

  size_t dimension() const { return components_.size(); }
  int64_t operator[](size_t i) const { return components_[i]; }
  std::span<const int64_t> components() const { return components_; }

  bool AllZero() const;
  // Component-wise a <= b; dimensions must agree.
  bool FitsWithin(const ResourceVector& capacity) const;

  friend bool operator==(const ResourceVector&,
                         const ResourceVector&) = default;
  friend auto operator<=>(const ResourceVector& a, const ResourceVector& b) {
    return a.components_ <=> b.components_;
  }

 private:
  std::vector<int64_t> components_;
};

std::string ToString(const ResourceVector& v);

struct Request {
  RequestId id = 0;
  ResourceVector demand;
  TimePoint start = 0;
  TimePoint end = 0;

  TimePoint span() const { return end - start; }
  bool ActiveAt(TimePoint t) const { return start <= t && t < end; }

  friend bool operator==(const Request&, const Request&) = default;
};

// Half-open intervals share an instant iff each starts before the other ends.
inline bool Intersects(const Request& a, const Request& b) {
  return a.start < b.end && b.start < a.end;
}

// Input to validation. Missing ids are assigned 1, 2, ... by position.
struct RawRequest {
  std::optional<RequestId> id;
  std::vector<int64_t> demand;
  TimePoint start = 0;
  TimePoint end = 0;
};

struct RawInstance {
  std::vector<int64_t> capacity;
  std::vector<RawRequest> requests;
};

// A validated, immutable instance. Only ValidateInstance and the
// transformations in this library (which preserve validity) construct one.
class Instance {
 public:
  struct TrustedTag {
    explicit TrustedTag() = default;
  };

  Instance() = default;
  // Skips validation; callers guarantee the invariants. Intended for
  // transformations of already validated instances.
  Instance(TrustedTag, ResourceVector capacity, std::vector<Request> requests);

  const ResourceVector& capacity() const { return capacity_; }
  std::span<const Request> requests() const { return requests_; }
  const Request& request(size_t index) const { return requests_[index]; }
  size_t dimension() const { return capacity_.dimension(); }
  size_t size() const { return requests_.size(); }
  bool empty() const { return requests_.empty(); }

  // Largest end time, 0 for the empty instance.
  TimePoint Horizon() const;

  std::optional<size_t> IndexOf(RequestId id) const;
  bool Contains(RequestId id) const { return IndexOf(id).has_value(); }

  // Sub-instance holding the requests at `indices`, in the given order.
  Instance Subset(std::span<const size_t> indices) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.capacity_ == b.capacity_ && a.requests_ == b.requests_;
  }

 private:
  ResourceVector capacity_;
  std::vector<Request> requests_;
  // (id, index) pairs sorted by id.
  std::vector<std::pair<RequestId, size_t>> id_index_;
};

struct ValidateOptions {
  // Remove zero-duration requests instead of rejecting them.
  bool drop_empty = false;
};

struct ValidationResult {
  std::optional<Instance> instance;
  std::vector<std::string> errors;
  size_t dropped_empty = 0;

  bool ok() const { return instance.has_value(); }
};

ValidationResult ValidateInstance(const RawInstance& raw,
                                  const ValidateOptions& options = {});

// Throws Error(kValidation) listing the first problems found.
Instance ValidateOrThrow(const RawInstance& raw,
                         const ValidateOptions& options = {});

RawInstance ToRaw(const Instance& instance);

// One run of the active-request count: `count` requests are active on
// [from, to).
struct ActiveSegment {
  TimePoint from = 0;
  TimePoint to = 0;
  size_t count = 0;
};

struct InstanceStats {
  size_t n = 0;
  size_t d = 0;
  TimePoint T = 0;
  size_t h = 0;
  size_t phi = 0;
  size_t tau = 0;
  std::vector<ActiveSegment> active_profile;
};

InstanceStats ComputeStats(const Instance& instance);

struct TypeKey {
  ResourceVector demand;
  TimePoint start = 0;
  TimePoint end = 0;

  friend bool operator==(const TypeKey&, const TypeKey&) = default;
  friend auto operator<=>(const TypeKey&, const TypeKey&) = default;
};

struct TypeEntry {
  TypeKey key;
  size_t multiplicity = 0;
  std::vector<RequestId> members;  // ascending
};

// Requests grouped by (demand, start, end), sorted by key.
struct TypeTable {
  std::vector<TypeEntry> entries;
};

TypeTable GroupTypes(const Instance& instance);

// Number of distinct demand vectors.
size_t CountFlavors(const Instance& instance);

}  // namespace dvbp

#endif  // DVBP_CORE_MODEL_H_
