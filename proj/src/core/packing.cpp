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

#include "core/packing.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/error.h"
#include "core/text.h"

namespace dvbp {
namespace {

bool SameType(const Request& a, const Request& b) {
  return a.start == b.start && a.end == b.end && a.demand == b.demand;
}

std::vector<TimePoint> DistinctCoordinates(const Instance& instance,
                                           std::span<const size_t> indices) {
  std::vector<TimePoint> coordinates;
  coordinates.reserve(2 * indices.size());
  for (size_t i : indices) {
    coordinates.push_back(instance.request(i).start);
    coordinates.push_back(instance.request(i).end);
  }
  std::sort(coordinates.begin(), coordinates.end());
  coordinates.erase(std::unique(coordinates.begin(), coordinates.end()),
                    coordinates.end());
  return coordinates;
}

// Candidate indices in packing order: non-increasing priority, then
// ascending id.
std::vector<size_t> PackingOrder(const Instance& instance,
                                 std::span<const size_t> candidates,
                                 PriorityMode mode) {
  const TimePoint horizon = instance.Horizon();
  struct Keyed {
    Priority priority;
    RequestId id;
    size_t index;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(candidates.size());
  for (size_t i : candidates) {
    const Request& r = instance.request(i);
    keyed.push_back(
        {ComputePriority(r, instance.capacity(), horizon, mode), r.id, i});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (auto c = a.priority <=> b.priority; c != 0) return c > 0;
    return a.id < b.id;
  });
  std::vector<size_t> order;
  order.reserve(keyed.size());
  for (const Keyed& k : keyed) order.push_back(k.index);
  return order;
}

// Greedy single-bin pass over `order`, which is already sorted. Runs of
// identical requests are placed in one step; the result equals placing
// them one at a time.
std::vector<size_t> PackInOrder(const Instance& instance,
                                std::span<const size_t> order) {
  std::vector<size_t> packed;
  if (order.empty()) return packed;
  ResidualTimeline timeline(instance.capacity(),
                            DistinctCoordinates(instance, order));
  for (size_t i = 0; i < order.size();) {
    const Request& r = instance.request(order[i]);
    size_t run = 1;
    while (i + run < order.size() &&
           SameType(instance.request(order[i + run]), r)) {
      ++run;
    }
    const int64_t copies =
        timeline.CopiesThatFit(r, static_cast<int64_t>(run));
    if (copies > 0) {
      timeline.Place(r, copies);
      for (int64_t c = 0; c < copies; ++c) packed.push_back(order[i + c]);
    }
    i += run;
  }
  std::sort(packed.begin(), packed.end());
  return packed;
}

}  // namespace

std::string_view PriorityModeName(PriorityMode mode) {
  switch (mode) {
    case PriorityMode::kAlpha:
      return "alpha";
    case PriorityMode::kF1:
      return "f1";
    case PriorityMode::kF2:
      return "f2";
  }
  return "unknown";
}

PriorityMode ParsePriorityMode(std::string_view name) {
  if (name == "alpha") return PriorityMode::kAlpha;
  if (name == "f1") return PriorityMode::kF1;
  if (name == "f2") return PriorityMode::kF2;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown priority mode '" + std::string(name) +
                  "' (expected alpha, f1 or f2)");
}

Priority ComputePriority(const Request& request,
                         const ResourceVector& capacity, TimePoint horizon,
                         PriorityMode mode) {
  int64_t alpha = std::numeric_limits<int64_t>::max();
  bool any_positive = false;
  for (size_t j = 0; j < request.demand.dimension(); ++j) {
    if (request.demand[j] == 0) continue;
    any_positive = true;
    alpha = std::min(alpha, capacity[j] / request.demand[j]);
  }
  if (!any_positive) return Priority{.infinite = true, .value = Rational(0)};
  const int64_t span = request.span();
  switch (mode) {
    case PriorityMode::kAlpha:
      return Priority{.value = Rational(alpha)};
    case PriorityMode::kF1:
      return Priority{.value = Rational(alpha) + Rational(1, 2 * span)};
    case PriorityMode::kF2:
      return Priority{.value = Rational(alpha) * Rational(horizon, span)};
  }
  throw Error(ErrorCode::kInternal, "unhandled priority mode");
}

ResidualTimeline::ResidualTimeline(const ResourceVector& capacity,
                                   std::vector<TimePoint> coordinates)
    : dims_(capacity.dimension()),
      coordinates_(std::move(coordinates)),
      segments_(coordinates_.size() > 1 ? coordinates_.size() - 1 : 1) {
  const size_t nodes = 4 * segments_;
  min_.resize(nodes * dims_);
  lazy_.assign(nodes * dims_, 0);
  for (size_t node = 0; node < nodes; ++node) {
    for (size_t j = 0; j < dims_; ++j) min_[node * dims_ + j] = capacity[j];
  }
}

std::pair<size_t, size_t> ResidualTimeline::SegmentRange(
    const Request& request) const {
  auto first = std::lower_bound(coordinates_.begin(), coordinates_.end(),
                                request.start);
  auto last = std::lower_bound(coordinates_.begin(), coordinates_.end(),
                               request.end);
  if (first == coordinates_.end() || *first != request.start ||
      last == coordinates_.end() || *last != request.end) {
    throw Error(ErrorCode::kInvalidArgument,
                "request " + std::to_string(request.id) +
                    " lies outside the residual timeline");
  }
  return {static_cast<size_t>(first - coordinates_.begin()),
          static_cast<size_t>(last - coordinates_.begin())};
}

void ResidualTimeline::Push(size_t node) const {
  for (size_t j = 0; j < dims_; ++j) {
    const int64_t pending = lazy_[node * dims_ + j];
    if (pending == 0) continue;
    for (size_t child = 2 * node; child <= 2 * node + 1; ++child) {
      min_[child * dims_ + j] += pending;
      lazy_[child * dims_ + j] += pending;
    }
    lazy_[node * dims_ + j] = 0;
  }
}

void ResidualTimeline::Query(size_t node, size_t lo, size_t hi, size_t from,
                             size_t to, std::vector<int64_t>& out) const {
  if (to <= lo || hi <= from) return;
  if (from <= lo && hi <= to) {
    for (size_t j = 0; j < dims_; ++j) {
      out[j] = std::min(out[j], min_[node * dims_ + j]);
    }
    return;
  }
  Push(node);
  const size_t mid = (lo + hi) / 2;
  Query(2 * node, lo, mid, from, to, out);
  Query(2 * node + 1, mid, hi, from, to, out);
}

void ResidualTimeline::Update(size_t node, size_t lo, size_t hi, size_t from,
                              size_t to, std::span<const int64_t> delta) {
  if (to <= lo || hi <= from) return;
  if (from <= lo && hi <= to) {
    for (size_t j = 0; j < dims_; ++j) {
      min_[node * dims_ + j] += delta[j];
      lazy_[node * dims_ + j] += delta[j];
    }
    return;
  }
  Push(node);
  const size_t mid = (lo + hi) / 2;
  Update(2 * node, lo, mid, from, to, delta);
  Update(2 * node + 1, mid, hi, from, to, delta);
  for (size_t j = 0; j < dims_; ++j) {
    min_[node * dims_ + j] =
        std::min(min_[2 * node * dims_ + j], min_[(2 * node + 1) * dims_ + j]);
  }
}

std::vector<int64_t> ResidualTimeline::MinResidual(TimePoint start,
                                                   TimePoint end) const {
  Request probe;
  probe.start = start;
  probe.end = end;
  auto [from, to] = SegmentRange(probe);
  std::vector<int64_t> out(dims_, std::numeric_limits<int64_t>::max());
  Query(1, 0, segments_, from, to, out);
  return out;
}

int64_t ResidualTimeline::CopiesThatFit(const Request& request,
                                        int64_t limit) const {
  auto [from, to] = SegmentRange(request);
  std::vector<int64_t>& residual = scratch_;
  residual.assign(dims_, std::numeric_limits<int64_t>::max());
  Query(1, 0, segments_, from, to, residual);
  int64_t copies = limit;
  for (size_t j = 0; j < dims_ && copies > 0; ++j) {
    const int64_t a = request.demand[j];
    if (a == 0) continue;
    copies = std::min(copies, residual[j] < 0 ? 0 : residual[j] / a);
  }
  return copies;
}

void ResidualTimeline::Place(const Request& request, int64_t copies) {
  auto [from, to] = SegmentRange(request);
  std::vector<int64_t>& delta = scratch_;
  delta.resize(dims_);
  for (size_t j = 0; j < dims_; ++j) delta[j] = -request.demand[j] * copies;
  Update(1, 0, segments_, from, to, delta);
}

std::vector<size_t> GreedyPackBinIndices(const Instance& instance,
                                         std::span<const size_t> candidates,
                                         PriorityMode mode) {
  std::vector<size_t> order = PackingOrder(instance, candidates, mode);
  return PackInOrder(instance, order);
}

std::vector<RequestId> GreedyPackBin(const Instance& instance,
                                     std::span<const RequestId> candidates,
                                     PriorityMode mode) {
  std::vector<size_t> indices;
  indices.reserve(candidates.size());
  for (RequestId id : candidates) {
    auto index = instance.IndexOf(id);
    if (!index) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown candidate request id " + std::to_string(id));
    }
    indices.push_back(*index);
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<RequestId> packed;
  for (size_t i : GreedyPackBinIndices(instance, indices, mode)) {
    packed.push_back(instance.request(i).id);
  }
  std::sort(packed.begin(), packed.end());
  return packed;
}

std::optional<int64_t> Packing::BinOf(RequestId id) const {
  auto it = std::lower_bound(
      assignment.begin(), assignment.end(), id,
      [](const std::pair<RequestId, int64_t>& p, RequestId v) {
        return p.first < v;
      });
  if (it == assignment.end() || it->first != id) return std::nullopt;
  return it->second;
}

void Packing::Normalize() {
  std::sort(assignment.begin(), assignment.end());
  bins = 0;
  for (const auto& entry : assignment) bins = std::max(bins, entry.second);
}

std::string VerificationReport::Describe() const {
  std::ostringstream out;
  out << (feasible ? "feasible" : "infeasible") << "\n";
  for (const Violation& v : violations) {
    out << "violation: bin " << v.bin << ", t=" << v.time << ", dimension "
        << v.dimension << ": load " << v.load << " > capacity " << v.capacity
        << "\n";
  }
  for (RequestId id : unassigned) {
    out << "unassigned: request " << id << "\n";
  }
  return out.str();
}

VerificationReport VerifyPacking(const Instance& instance,
                                 const Packing& packing) {
  VerificationReport report;
  const size_t d = instance.dimension();
  std::vector<int64_t> bin_of(instance.size(), 0);
  for (const auto& [id, bin] : packing.assignment) {
    auto index = instance.IndexOf(id);
    if (!index) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown request id " + std::to_string(id) + " in packing");
    }
    if (bin < 1 || bin > packing.bins) {
      throw Error(ErrorCode::kInvalidArgument,
                  "request " + std::to_string(id) + " assigned to bin " +
                      std::to_string(bin) + " outside 1.." +
                      std::to_string(packing.bins));
    }
    if (bin_of[*index] != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "request " + std::to_string(id) + " assigned twice");
    }
    bin_of[*index] = bin;
  }
  for (size_t i = 0; i < instance.size(); ++i) {
    if (bin_of[i] == 0) report.unassigned.push_back(instance.request(i).id);
  }
  std::sort(report.unassigned.begin(), report.unassigned.end());
  if (!packing.partial && !report.unassigned.empty()) report.feasible = false;

  // Events grouped by bin, then time; ends before starts at equal times.
  struct Event {
    int64_t bin;
    TimePoint time;
    int kind;  // 0 = end, 1 = start
    size_t index;
  };
  std::vector<Event> events;
  events.reserve(2 * packing.assignment.size());
  for (size_t i = 0; i < instance.size(); ++i) {
    if (bin_of[i] == 0) continue;
    events.push_back({bin_of[i], instance.request(i).start, 1, i});
    events.push_back({bin_of[i], instance.request(i).end, 0, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.bin != b.bin) return a.bin < b.bin;
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.index < b.index;
  });

  const ResourceVector& cap = instance.capacity();
  std::vector<int64_t> load(d, 0);
  std::vector<int64_t> reported(d, -1);
  for (size_t e = 0; e < events.size();) {
    const int64_t bin = events[e].bin;
    const TimePoint t = events[e].time;
    for (; e < events.size() && events[e].bin == bin && events[e].time == t;
         ++e) {
      const ResourceVector& a = instance.request(events[e].index).demand;
      const int64_t sign = events[e].kind == 1 ? 1 : -1;
      for (size_t j = 0; j < d; ++j) load[j] += sign * a[j];
    }
    for (size_t j = 0; j < d; ++j) {
      if (load[j] > cap[j]) {
        if (reported[j] != load[j]) {
          report.violations.push_back({bin, t, j + 1, load[j], cap[j]});
          reported[j] = load[j];
        }
      } else {
        reported[j] = -1;
      }
    }
    if (e == events.size() || events[e].bin != bin) {
      std::fill(load.begin(), load.end(), 0);
      std::fill(reported.begin(), reported.end(), -1);
    }
  }
  if (!report.violations.empty()) report.feasible = false;
  return report;
}

Packing HeuristicSolve(const Instance& instance, PriorityMode mode) {
  std::vector<size_t> all(instance.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  // The instance does not change between rounds, so neither does the order.
  std::vector<size_t> remaining = PackingOrder(instance, all, mode);

  Packing packing;
  std::vector<char> placed(instance.size(), 0);
  while (!remaining.empty()) {
    ++packing.bins;
    std::vector<size_t> packed = PackInOrder(instance, remaining);
    if (packed.empty()) {
      throw Error(ErrorCode::kInternal, "greedy round packed nothing");
    }
    for (size_t i : packed) {
      placed[i] = 1;
      packing.assignment.emplace_back(instance.request(i).id, packing.bins);
    }
    std::erase_if(remaining, [&placed](size_t i) { return placed[i] != 0; });
  }
  std::sort(packing.assignment.begin(), packing.assignment.end());
  return packing;
}

std::string PackingToCsv(const Packing& packing) {
  std::string out = "request_id,bin\n";
  for (const auto& [id, bin] : packing.assignment) {
    out += std::to_string(id) + "," + std::to_string(bin) + "\n";
  }
  return out;
}

std::string PackingToJson(const Packing& packing) {
  nlohmann::ordered_json doc;
  doc["bins"] = packing.bins;
  doc["partial"] = packing.partial;
  doc["assignment"] = nlohmann::ordered_json::array();
  for (const auto& [id, bin] : packing.assignment) {
    nlohmann::ordered_json row;
    row["request_id"] = id;
    row["bin"] = bin;
    doc["assignment"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

Packing ParsePacking(std::string_view text) {
  Packing packing;
  if (FirstNonBlank(text) == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
      for (const auto& row : doc.at("assignment")) {
        packing.assignment.emplace_back(row.at("request_id").get<int64_t>(),
                                        row.at("bin").get<int64_t>());
      }
      packing.partial = doc.value("partial", false);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  std::string("malformed packing JSON: ") + e.what());
    }
    packing.Normalize();
    if (doc.contains("bins")) {
      packing.bins = std::max(packing.bins, doc["bins"].get<int64_t>());
    }
    return packing;
  }

  LineReader reader(text);
  std::string_view line;
  bool header_seen = false;
  while (reader.Next(line)) {
    line = Trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "request_id,bin") {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(reader.line_number()) +
                        ": expected header 'request_id,bin'");
      }
      header_seen = true;
      continue;
    }
    auto fields = Split(line, ',');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(reader.line_number()) +
                      ": expected 'request_id,bin'");
    }
    packing.assignment.emplace_back(
        ParseInt64(fields[0], reader.line_number()),
        ParseInt64(fields[1], reader.line_number()));
  }
  packing.Normalize();
  return packing;
}

}  // namespace dvbp
