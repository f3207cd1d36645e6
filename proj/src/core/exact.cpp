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

#include "core/exact.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/error.h"

namespace dvbp {
namespace {

// Requests mapped onto the elementary segments between consecutive distinct
// event coordinates.
struct Segments {
  size_t count = 0;
  std::vector<size_t> first;  // per request
  std::vector<size_t> last;   // exclusive
};

Segments BuildSegments(const Instance& instance) {
  std::vector<TimePoint> coordinates;
  for (const Request& r : instance.requests()) {
    coordinates.push_back(r.start);
    coordinates.push_back(r.end);
  }
  std::sort(coordinates.begin(), coordinates.end());
  coordinates.erase(std::unique(coordinates.begin(), coordinates.end()),
                    coordinates.end());
  Segments seg;
  seg.count = coordinates.empty() ? 0 : coordinates.size() - 1;
  auto locate = [&coordinates](TimePoint t) {
    return static_cast<size_t>(
        std::lower_bound(coordinates.begin(), coordinates.end(), t) -
        coordinates.begin());
  };
  for (const Request& r : instance.requests()) {
    seg.first.push_back(locate(r.start));
    seg.last.push_back(locate(r.end));
  }
  return seg;
}

// Renumbers bin labels by first appearance in request order.
Packing MakePacking(const Instance& instance,
                    const std::vector<int64_t>& labels) {
  std::vector<int64_t> renumber;
  Packing packing;
  for (size_t i = 0; i < instance.size(); ++i) {
    const auto label = static_cast<size_t>(labels[i]);
    if (label >= renumber.size()) renumber.resize(label + 1, 0);
    if (renumber[label] == 0) renumber[label] = ++packing.bins;
    packing.assignment.emplace_back(instance.request(i).id, renumber[label]);
  }
  std::sort(packing.assignment.begin(), packing.assignment.end());
  return packing;
}

void CheckWitness(const Instance& instance, const Packing& packing,
                  const char* solver) {
  if (!VerifyPacking(instance, packing).feasible) {
    throw Error(ErrorCode::kInternal,
                std::string(solver) + " produced an infeasible witness");
  }
}

class BruteForceSearch {
 public:
  explicit BruteForceSearch(const Instance& instance)
      : instance_(instance),
        segments_(BuildSegments(instance)),
        dims_(instance.dimension()),
        order_(instance.size()),
        labels_(instance.size(), -1),
        best_labels_(instance.size(), -1),
        load_(instance.size() * std::max<size_t>(segments_.count, 1) * dims_,
              0) {
    std::iota(order_.begin(), order_.end(), size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
      return instance.request(a).start < instance.request(b).start;
    });
    best_ = static_cast<int64_t>(instance.size()) + 1;
  }

  int64_t Run() {
    if (instance_.empty()) return 0;
    Search(0, 0);
    return best_;
  }

  const std::vector<int64_t>& best_labels() const { return best_labels_; }

 private:
  int64_t& Load(size_t bin, size_t segment, size_t dim) {
    return load_[(bin * segments_.count + segment) * dims_ + dim];
  }

  bool Fits(size_t bin, size_t request) {
    const ResourceVector& a = instance_.request(request).demand;
    for (size_t s = segments_.first[request]; s < segments_.last[request];
         ++s) {
      for (size_t j = 0; j < dims_; ++j) {
        if (Load(bin, s, j) + a[j] > instance_.capacity()[j]) return false;
      }
    }
    return true;
  }

  void Apply(size_t bin, size_t request, int64_t sign) {
    const ResourceVector& a = instance_.request(request).demand;
    for (size_t s = segments_.first[request]; s < segments_.last[request];
         ++s) {
      for (size_t j = 0; j < dims_; ++j) Load(bin, s, j) += sign * a[j];
    }
  }

  void Search(size_t depth, int64_t used) {
    if (used >= best_) return;
    if (depth == order_.size()) {
      best_ = used;
      best_labels_ = labels_;
      return;
    }
    const size_t request = order_[depth];
    for (int64_t bin = 0; bin < used; ++bin) {
      if (!Fits(static_cast<size_t>(bin), request)) continue;
      Apply(static_cast<size_t>(bin), request, +1);
      labels_[request] = bin;
      Search(depth + 1, used);
      Apply(static_cast<size_t>(bin), request, -1);
    }
    if (used + 1 < best_) {
      Apply(static_cast<size_t>(used), request, +1);
      labels_[request] = used;
      Search(depth + 1, used + 1);
      Apply(static_cast<size_t>(used), request, -1);
    }
    labels_[request] = -1;
  }

  const Instance& instance_;
  Segments segments_;
  size_t dims_;
  std::vector<size_t> order_;
  std::vector<int64_t> labels_;
  std::vector<int64_t> best_labels_;
  std::vector<int64_t> load_;
  int64_t best_ = 0;
};

uint64_t IntPow(uint64_t base, size_t exponent) {
  uint64_t result = 1;
  for (size_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

ExactSolution BruteForceOpt(const Instance& instance, size_t limit) {
  if (instance.size() > limit) {
    throw Error(ErrorCode::kRefused,
                "brute force refused: n=" + std::to_string(instance.size()) +
                    " exceeds the limit of " + std::to_string(limit));
  }
  BruteForceSearch search(instance);
  ExactSolution solution;
  solution.bins = search.Run();
  if (!instance.empty()) {
    solution.packing = MakePacking(instance, search.best_labels());
  }
  CheckWitness(instance, solution.packing, "brute force");
  return solution;
}

DpResult DpFeasible(const Instance& instance, int64_t bins,
                    const DpOptions& options) {
  if (bins < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bin count must be non-negative");
  }
  if (instance.empty()) return DpResult{true, Packing{}};
  if (bins == 0) return DpResult{false, std::nullopt};

  const Segments seg = BuildSegments(instance);
  const size_t m = seg.count;
  std::vector<std::vector<size_t>> active(m);
  for (size_t i = 0; i < instance.size(); ++i) {
    for (size_t s = seg.first[i]; s < seg.last[i]; ++s) active[s].push_back(i);
  }
  size_t height = 0;
  for (const auto& a : active) height = std::max(height, a.size());

  const auto k = static_cast<uint64_t>(bins);
  if (height > options.max_height || bins > options.max_bins ||
      static_cast<double>(height) * std::log2(static_cast<double>(k)) > 32) {
    std::ostringstream message;
    message << "dp refused: h=" << height << ", k=" << bins
            << ", estimated k^(2h) = "
            << std::pow(static_cast<double>(k), 2.0 * height)
            << " (guard rails: h <= " << options.max_height
            << ", k <= " << options.max_bins << ")";
    throw Error(ErrorCode::kRefused, message.str());
  }

  const size_t d = instance.dimension();
  const ResourceVector& cap = instance.capacity();
  auto digit = [k](uint64_t code, size_t position) {
    return (code / IntPow(k, position)) % k;
  };
  // Positions (in active[t] and active[t + 1]) of requests active at both.
  auto shared_positions = [&active](size_t t) {
    std::vector<std::pair<size_t, size_t>> shared;
    const auto& here = active[t];
    const auto& next = active[t + 1];
    for (size_t p = 0, q = 0; p < here.size() && q < next.size();) {
      if (here[p] == next[q]) {
        shared.emplace_back(p, q);
        ++p;
        ++q;
      } else if (here[p] < next[q]) {
        ++p;
      } else {
        ++q;
      }
    }
    return shared;
  };

  // valid[t]: labelings of active[t] that respect the capacity at t and
  // extend to a packing of everything that is active later.
  std::vector<std::vector<uint64_t>> valid(m);
  std::vector<int64_t> load(static_cast<size_t>(bins) * d);
  for (size_t t = m; t-- > 0;) {
    const auto& members = active[t];
    std::vector<std::pair<size_t, size_t>> shared;
    std::vector<char> allowed;
    if (t + 1 < m) {
      shared = shared_positions(t);
      allowed.assign(IntPow(k, shared.size()), 0);
      for (uint64_t code : valid[t + 1]) {
        uint64_t key = 0;
        for (size_t s = shared.size(); s-- > 0;) {
          key = key * k + digit(code, shared[s].second);
        }
        allowed[key] = 1;
      }
    } else {
      allowed.assign(1, 1);
    }
    const uint64_t codes = IntPow(k, members.size());
    for (uint64_t code = 0; code < codes; ++code) {
      uint64_t key = 0;
      for (size_t s = shared.size(); s-- > 0;) {
        key = key * k + digit(code, shared[s].first);
      }
      if (!allowed[key]) continue;
      std::fill(load.begin(), load.end(), 0);
      bool fits = true;
      uint64_t rest = code;
      for (size_t p = 0; p < members.size() && fits; ++p, rest /= k) {
        const size_t bin = rest % k;
        const ResourceVector& a = instance.request(members[p]).demand;
        for (size_t j = 0; j < d; ++j) {
          int64_t& l = load[bin * d + j];
          l += a[j];
          if (l > cap[j]) fits = false;
        }
      }
      if (fits) valid[t].push_back(code);
    }
    if (valid[t].empty()) return DpResult{false, std::nullopt};
  }

  // Forward pass: pick labelings consistent with the ones already chosen.
  std::vector<int64_t> labels(instance.size(), -1);
  uint64_t chosen = valid[0].front();
  for (size_t p = 0; p < active[0].size(); ++p) {
    labels[active[0][p]] = static_cast<int64_t>(digit(chosen, p));
  }
  for (size_t t = 1; t < m; ++t) {
    const auto& members = active[t];
    auto it = std::find_if(valid[t].begin(), valid[t].end(), [&](uint64_t c) {
      for (size_t p = 0; p < members.size(); ++p) {
        const int64_t fixed = labels[members[p]];
        if (fixed >= 0 && static_cast<uint64_t>(fixed) != digit(c, p)) {
          return false;
        }
      }
      return true;
    });
    if (it == valid[t].end()) {
      throw Error(ErrorCode::kInternal, "dp witness reconstruction failed");
    }
    for (size_t p = 0; p < members.size(); ++p) {
      labels[members[p]] = static_cast<int64_t>(digit(*it, p));
    }
  }
  Packing witness = MakePacking(instance, labels);
  CheckWitness(instance, witness, "dp");
  return DpResult{true, std::move(witness)};
}

ExactSolution DpMinimumBins(const Instance& instance,
                            const DpOptions& options) {
  for (int64_t k = 0; k <= options.max_bins; ++k) {
    DpResult result = DpFeasible(instance, k, options);
    if (result.feasible) return ExactSolution{k, std::move(*result.witness)};
  }
  throw Error(ErrorCode::kRefused,
              "dp found no packing within " + std::to_string(options.max_bins) +
                  " bins (raise the bin guard rail)");
}

IlpModel ExportIlp(const Instance& instance, int64_t bins) {
  if (bins < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ILP export needs k >= 1");
  }
  const TypeTable types = GroupTypes(instance);
  const size_t tau = types.entries.size();
  const size_t d = instance.dimension();
  const ResourceVector& cap = instance.capacity();
  IlpModel model;

  auto x = [](size_t type, int64_t bin) {
    return "x_" + std::to_string(type + 1) + "_" + std::to_string(bin);
  };
  auto y = [](int64_t bin) { return "y_" + std::to_string(bin); };

  std::ostringstream lp;
  lp << "\\ dynamic vector bin packing: " << tau << " types, " << bins
     << " bins\n";
  lp << "Minimize\n obj:";
  for (int64_t j = 1; j <= bins; ++j) lp << (j == 1 ? " " : " + ") << y(j);
  lp << "\nSubject To\n";

  for (size_t i = 0; i < tau; ++i) {
    lp << " assign_" << i + 1 << ":";
    for (int64_t j = 1; j <= bins; ++j) {
      lp << (j == 1 ? " " : " + ") << x(i, j);
    }
    lp << " = " << types.entries[i].multiplicity << "\n";
    ++model.assign_rows;
  }
  for (size_t i = 0; i < tau; ++i) {
    for (int64_t j = 1; j <= bins; ++j) {
      lp << " activate_" << i + 1 << "_" << j << ": " << x(i, j) << " - "
         << types.entries[i].multiplicity << " " << y(j) << " <= 0\n";
      ++model.activate_rows;
    }
  }

  // Active type sets between consecutive event coordinates.
  std::vector<TimePoint> coordinates;
  for (const TypeEntry& e : types.entries) {
    coordinates.push_back(e.key.start);
    coordinates.push_back(e.key.end);
  }
  std::sort(coordinates.begin(), coordinates.end());
  coordinates.erase(std::unique(coordinates.begin(), coordinates.end()),
                    coordinates.end());
  for (size_t c = 0; c + 1 < coordinates.size(); ++c) {
    std::vector<size_t> active;
    for (size_t i = 0; i < tau; ++i) {
      const TypeKey& key = types.entries[i].key;
      if (key.start <= coordinates[c] && coordinates[c] < key.end) {
        active.push_back(i);
      }
    }
    if (active.empty()) continue;
    for (TimePoint t = coordinates[c]; t < coordinates[c + 1]; ++t) {
      for (int64_t j = 1; j <= bins; ++j) {
        for (size_t dim = 0; dim < d; ++dim) {
          lp << " resource_" << t << "_" << j << "_" << dim + 1 << ":";
          size_t terms = 0;
          for (size_t i : active) {
            const int64_t a = types.entries[i].key.demand[dim];
            if (a == 0) continue;
            if (terms > 0 && terms % 8 == 0) lp << "\n  ";
            lp << (terms == 0 ? " " : " + ") << a << " " << x(i, j);
            ++terms;
          }
          lp << " - " << cap[dim] << " " << y(j)
             << " <= 0\n";
          ++model.resource_rows;
        }
      }
    }
  }

  lp << "Bounds\n";
  for (size_t i = 0; i < tau; ++i) {
    for (int64_t j = 1; j <= bins; ++j) {
      lp << " 0 <= " << x(i, j) << " <= " << types.entries[i].multiplicity
         << "\n";
    }
  }
  if (tau > 0) {
    lp << "Generals\n";
    for (size_t i = 0; i < tau; ++i) {
      for (int64_t j = 1; j <= bins; ++j) lp << " " << x(i, j) << "\n";
    }
  }
  lp << "Binaries\n";
  for (int64_t j = 1; j <= bins; ++j) lp << " " << y(j) << "\n";
  lp << "End\n";
  model.lp = lp.str();
  model.integer_variables = tau * static_cast<size_t>(bins);
  model.binary_variables = static_cast<size_t>(bins);

  nlohmann::ordered_json sidecar;
  sidecar["k"] = bins;
  sidecar["tau"] = tau;
  auto& type_list = sidecar["types"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < tau; ++i) {
    const TypeEntry& e = types.entries[i];
    nlohmann::ordered_json entry;
    entry["index"] = i + 1;
    entry["demand"] = std::vector<int64_t>(e.key.demand.components().begin(),
                                           e.key.demand.components().end());
    entry["start"] = e.key.start;
    entry["end"] = e.key.end;
    entry["multiplicity"] = e.multiplicity;
    entry["members"] = e.members;
    type_list.push_back(std::move(entry));
  }
  auto& variables = sidecar["variables"] = nlohmann::ordered_json::object();
  for (size_t i = 0; i < tau; ++i) {
    for (int64_t j = 1; j <= bins; ++j) {
      variables[x(i, j)] = {{"type", i + 1}, {"bin", j}};
    }
  }
  for (int64_t j = 1; j <= bins; ++j) variables[y(j)] = {{"bin", j}};
  model.sidecar = sidecar.dump(2) + "\n";
  return model;
}

}  // namespace dvbp
