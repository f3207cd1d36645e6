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

// Ingestion of VM placement traces into exact-integer instances. The column
// layout, scaling and flavor rules come from a JSON schema so the same code
// serves interval-style traces (one row per VM with start and end) and
// event-style traces (separate create and delete rows).

#ifndef DVBP_CORE_INGEST_H_
#define DVBP_CORE_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "core/model.h"
#include "core/rational.h"

namespace dvbp {

struct ResourceColumn {
  std::string column;
  // Raw values are multiplied by `scale` and rounded up.
  int64_t scale = 1;
  // Bin capacity in raw units; multiplied by `scale` and rounded down.
  Rational capacity;
};

// Requests whose flavor name is listed get each demand component divided by
// the matching divisor (rounded up) after scaling.
struct FlavorRule {
  std::vector<std::string> flavors;
  std::vector<int64_t> divide;
};

struct TraceSchema {
  enum class Layout { kIntervals, kEvents };
  enum class TimeMode {
    // Distinct raw times ranked 1, 2, ... in increasing order.
    kRank,
    // floor(raw * time_scale).
    kScaled,
  };
  enum class MissingEnd { kDrop, kError, kHorizon };

  Layout layout = Layout::kIntervals;
  char delimiter = ',';
  bool header = true;

  // Columns are header names, or 0-based indices written as decimal strings
  // when there is no header.
  std::string start_column;
  std::string end_column;
  std::string id_column;
  std::string time_column;
  std::string kind_column;
  std::string create_value = "0";
  std::string delete_value = "1";

  std::vector<ResourceColumn> resources;
  // Placeholders "{column}" expand to the trimmed raw field, with redundant
  // trailing decimal zeros removed ("4.0" -> "4").
  std::string flavor_name;
  std::vector<FlavorRule> flavor_rules;

  TimeMode time_mode = TimeMode::kScaled;
  int64_t time_scale = 1;
  MissingEnd missing_end = MissingEnd::kDrop;
  bool drop_empty = true;
  size_t max_errors = 100;
};

// Field-by-field format is documented in README.md.
TraceSchema ParseTraceSchema(std::string_view json);
TraceSchema LoadTraceSchema(const std::string& path);

struct IngestReport {
  size_t rows_read = 0;
  size_t requests = 0;
  size_t dropped_empty = 0;  // end <= start after time mapping
  size_t dropped_missing_end = 0;
  size_t error_rows = 0;
  std::vector<std::string> errors;  // first few, with line numbers

  std::string ToJson() const;
};

struct IngestResult {
  Instance instance;
  IngestReport report;
};

// Streams the trace once. Throws ErrorCode::kParse when more than
// schema.max_errors rows are rejected.
IngestResult IngestTrace(std::istream& input, const TraceSchema& schema);

// ceil(value * scale) for a decimal literal; exposed for tests.
int64_t CeilScaledDecimal(std::string_view text, int64_t scale);

}  // namespace dvbp

#endif  // DVBP_CORE_INGEST_H_
