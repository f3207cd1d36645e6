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

#include "core/ingest.h"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "core/error.h"
#include "core/text.h"

namespace dvbp {
namespace {

using Wide = __int128;

constexpr size_t kReportedErrors = 20;
// Fixed-point resolution for raw times: 10^-12.
constexpr int kTimeFractionDigits = 12;

struct Decimal {
  Wide mantissa = 0;  // signed
  int exponent = 0;
};

std::optional<Decimal> ParseDecimal(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Decimal d;
  int digits = 0;
  bool point = false;
  size_t i = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (c < '0' || c > '9') break;
    if (d.mantissa == 0 && c == '0') {
      if (point) --d.exponent;
      continue;
    }
    if (++digits > 36) return std::nullopt;
    d.mantissa = d.mantissa * 10 + (c - '0');
    if (point) --d.exponent;
  }
  if (i == 0 || (i == 1 && point)) return std::nullopt;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return std::nullopt;
    std::string_view rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    int64_t e = 0;
    try {
      e = ParseInt64(rest);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (e > 100 || e < -100) return std::nullopt;
    d.exponent += static_cast<int>(e);
  }
  if (negative) d.mantissa = -d.mantissa;
  return d;
}

// value * scale, rounded up (round_up) or down, as a 128-bit integer.
std::optional<Wide> ScaleDecimal(const Decimal& d, Wide scale, bool round_up) {
  constexpr Wide kLimit = static_cast<Wide>(1) << 125;
  Wide num = d.mantissa;
  if (num == 0) return 0;
  if (num > kLimit / scale || num < -kLimit / scale) return std::nullopt;
  num *= scale;
  int e = d.exponent;
  for (; e > 0; --e) {
    if (num > kLimit / 10 || num < -kLimit / 10) return std::nullopt;
    num *= 10;
  }
  if (e < -38) {
    // |value * scale| < 1.
    if (round_up) return num > 0 ? 1 : 0;
    return num < 0 ? -1 : 0;
  }
  Wide den = 1;
  for (; e < 0; ++e) den *= 10;
  Wide q = num / den;
  const Wide r = num % den;
  if (r != 0) {
    if (round_up && num > 0) ++q;
    if (!round_up && num < 0) --q;
  }
  return q;
}

bool IsMissing(std::string_view field) {
  field = Trim(field);
  return field.empty() || field == "NULL" || field == "null" ||
         field == "NaN" || field == "nan" || field == "NA";
}

std::vector<std::string> SplitCsvLine(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back(Trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.emplace_back(Trim(field));
  return fields;
}

std::string NormalizeNumber(std::string_view raw) {
  std::string s(Trim(raw));
  if (s.find('.') != std::string::npos &&
      s.find_first_of("eE") == std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  return s;
}

std::string ColumnFromJson(const nlohmann::json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<int64_t>());
  return j.get<std::string>();
}

class RowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PendingRequest {
  std::vector<int64_t> demand;
  Wide start = 0;
  std::optional<Wide> end;
  size_t line = 0;
};

class TraceIngester {
 public:
  explicit TraceIngester(const TraceSchema& schema) : schema_(schema) {
    if (schema.resources.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trace schema needs at least one resource column");
    }
    for (const ResourceColumn& r : schema.resources) {
      if (r.scale < 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "resource scale must be >= 1 for column " + r.column);
      }
      const Wide cap = static_cast<Wide>(r.capacity.num()) * r.scale /
                       r.capacity.den();
      if (cap < 0 || cap > std::numeric_limits<int64_t>::max()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "capacity out of range for column " + r.column);
      }
      capacity_.push_back(static_cast<int64_t>(cap));
    }
    for (const FlavorRule& rule : schema.flavor_rules) {
      if (rule.divide.size() != schema.resources.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "flavor rule divisor count must match the resources");
      }
      for (int64_t v : rule.divide) {
        if (v < 1) {
          throw Error(ErrorCode::kInvalidArgument,
                      "flavor rule divisors must be >= 1");
        }
      }
      for (const std::string& name : rule.flavors) {
        rule_by_flavor_.emplace(name, &rule);
      }
    }
    time_scale_ = schema.time_mode == TraceSchema::TimeMode::kRank
                      ? 1
                      : static_cast<Wide>(schema.time_scale);
    if (schema.time_mode == TraceSchema::TimeMode::kRank) {
      for (int i = 0; i < kTimeFractionDigits; ++i) time_scale_ *= 10;
    }
  }

  IngestResult Run(std::istream& input) {
    std::string line;
    size_t line_number = 0;
    if (schema_.header) {
      if (!std::getline(input, line)) {
        throw Error(ErrorCode::kParse, "trace is empty (expected a header)");
      }
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      header_ = SplitCsvLine(line, schema_.delimiter);
    }
    ResolveColumns();
    while (std::getline(input, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (Trim(line).empty()) continue;
      ++report_.rows_read;
      try {
        ProcessRow(SplitCsvLine(line, schema_.delimiter), line_number);
      } catch (const RowError& e) {
        RecordError(line_number, e.what());
      }
    }
    return Finish();
  }

 private:
  size_t Resolve(const std::string& column) const {
    if (column.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "trace schema column missing");
    }
    if (schema_.header) {
      auto it = std::find(header_.begin(), header_.end(), column);
      if (it != header_.end()) return static_cast<size_t>(it - header_.begin());
      throw Error(ErrorCode::kParse,
                  "column '" + column + "' not found in the trace header");
    }
    return static_cast<size_t>(ParseInt64(column));
  }

  void ResolveColumns() {
    if (schema_.layout == TraceSchema::Layout::kIntervals) {
      start_index_ = Resolve(schema_.start_column);
      end_index_ = Resolve(schema_.end_column);
    } else {
      id_index_ = Resolve(schema_.id_column);
      time_index_ = Resolve(schema_.time_column);
      kind_index_ = Resolve(schema_.kind_column);
    }
    for (const ResourceColumn& r : schema_.resources) {
      resource_index_.push_back(Resolve(r.column));
    }
    // Flavor name template: literal text and column references.
    const std::string& format = schema_.flavor_name;
    for (size_t i = 0; i < format.size();) {
      if (format[i] == '{') {
        const size_t close = format.find('}', i);
        if (close == std::string::npos) {
          throw Error(ErrorCode::kInvalidArgument,
                      "unterminated placeholder in flavor_name");
        }
        name_parts_.push_back(
            {"", Resolve(format.substr(i + 1, close - i - 1))});
        i = close + 1;
      } else {
        const size_t open = format.find('{', i);
        const size_t stop = open == std::string::npos ? format.size() : open;
        name_parts_.push_back({format.substr(i, stop - i), std::nullopt});
        i = stop;
      }
    }
  }

  const std::string& Field(const std::vector<std::string>& fields,
                           size_t index) const {
    if (index >= fields.size()) {
      throw RowError("row has " + std::to_string(fields.size()) +
                     " fields, needs column " + std::to_string(index + 1));
    }
    return fields[index];
  }

  Wide ParseTime(const std::string& field) const {
    auto d = ParseDecimal(field);
    if (!d) throw RowError("invalid time value '" + field + "'");
    auto t = ScaleDecimal(*d, time_scale_, /*round_up=*/false);
    if (!t) throw RowError("time value out of range '" + field + "'");
    return *t;
  }

  std::vector<int64_t> ParseDemand(const std::vector<std::string>& fields) {
    std::vector<int64_t> demand;
    for (size_t j = 0; j < schema_.resources.size(); ++j) {
      const std::string& field = Field(fields, resource_index_[j]);
      auto d = ParseDecimal(field);
      if (!d) throw RowError("invalid demand value '" + field + "'");
      if (d->mantissa < 0) throw RowError("negative demand '" + field + "'");
      auto scaled = ScaleDecimal(*d, schema_.resources[j].scale, true);
      if (!scaled || *scaled > std::numeric_limits<int64_t>::max()) {
        throw RowError("demand out of range '" + field + "'");
      }
      demand.push_back(static_cast<int64_t>(*scaled));
    }
    if (!rule_by_flavor_.empty()) {
      std::string name;
      for (const auto& [text, column] : name_parts_) {
        name += column ? NormalizeNumber(Field(fields, *column)) : text;
      }
      if (auto it = rule_by_flavor_.find(name); it != rule_by_flavor_.end()) {
        for (size_t j = 0; j < demand.size(); ++j) {
          const int64_t q = it->second->divide[j];
          demand[j] = (demand[j] + q - 1) / q;
        }
      }
    }
    for (size_t j = 0; j < demand.size(); ++j) {
      if (demand[j] > capacity_[j]) {
        throw RowError("demand " + std::to_string(demand[j]) +
                       " exceeds capacity " + std::to_string(capacity_[j]) +
                       " in column " + schema_.resources[j].column);
      }
    }
    return demand;
  }

  void ProcessRow(const std::vector<std::string>& fields, size_t line) {
    if (schema_.layout == TraceSchema::Layout::kIntervals) {
      PendingRequest request;
      request.line = line;
      request.demand = ParseDemand(fields);
      request.start = ParseTime(Field(fields, start_index_));
      const std::string& end = Field(fields, end_index_);
      if (!IsMissing(end)) request.end = ParseTime(end);
      pending_.push_back(std::move(request));
      return;
    }
    const std::string& id = Field(fields, id_index_);
    const std::string& kind = Field(fields, kind_index_);
    const Wide time = ParseTime(Field(fields, time_index_));
    if (kind == schema_.create_value) {
      if (open_events_.contains(id)) {
        throw RowError("request '" + id + "' created twice");
      }
      PendingRequest request;
      request.line = line;
      request.demand = ParseDemand(fields);
      request.start = time;
      open_events_.emplace(id, pending_.size());
      pending_.push_back(std::move(request));
    } else if (kind == schema_.delete_value) {
      auto it = open_events_.find(id);
      if (it == open_events_.end()) {
        throw RowError("delete for unknown request '" + id + "'");
      }
      pending_[it->second].end = time;
      open_events_.erase(it);
    } else {
      throw RowError("unknown event kind '" + kind + "'");
    }
  }

  void RecordError(size_t line, const std::string& message) {
    ++report_.error_rows;
    if (report_.errors.size() < kReportedErrors) {
      report_.errors.push_back("line " + std::to_string(line) + ": " + message);
    }
    if (report_.error_rows > schema_.max_errors) {
      std::string summary = "too many rejected trace rows (" +
                            std::to_string(report_.error_rows) + ")";
      for (const std::string& e : report_.errors) summary += "; " + e;
      throw Error(ErrorCode::kParse, summary);
    }
  }

  IngestResult Finish() {
    Wide latest = std::numeric_limits<int64_t>::min();
    for (const PendingRequest& r : pending_) {
      latest = std::max(latest, r.start);
      if (r.end) latest = std::max(latest, *r.end);
    }
    std::vector<PendingRequest> kept;
    kept.reserve(pending_.size());
    for (PendingRequest& r : pending_) {
      if (!r.end) {
        switch (schema_.missing_end) {
          case TraceSchema::MissingEnd::kDrop:
            ++report_.dropped_missing_end;
            continue;
          case TraceSchema::MissingEnd::kError:
            RecordError(r.line, "missing end time");
            continue;
          case TraceSchema::MissingEnd::kHorizon:
            r.end = latest + 1;
            break;
        }
      }
      kept.push_back(std::move(r));
    }
    pending_.clear();

    std::vector<Wide> times;
    if (schema_.time_mode == TraceSchema::TimeMode::kRank) {
      times.reserve(2 * kept.size());
      for (const PendingRequest& r : kept) {
        times.push_back(r.start);
        times.push_back(*r.end);
      }
      std::sort(times.begin(), times.end());
      times.erase(std::unique(times.begin(), times.end()), times.end());
    }
    auto map_time = [&](Wide t, size_t line) -> std::optional<int64_t> {
      if (schema_.time_mode == TraceSchema::TimeMode::kRank) {
        return static_cast<int64_t>(
            std::lower_bound(times.begin(), times.end(), t) - times.begin() +
            1);
      }
      if (t < 0 || t > std::numeric_limits<int64_t>::max()) {
        RecordError(line, "time out of range after scaling");
        return std::nullopt;
      }
      return static_cast<int64_t>(t);
    };

    RawInstance raw;
    raw.capacity = capacity_;
    raw.requests.reserve(kept.size());
    for (PendingRequest& r : kept) {
      auto start = map_time(r.start, r.line);
      auto end = map_time(*r.end, r.line);
      if (!start || !end) continue;
      if (*start >= *end && schema_.drop_empty) {
        ++report_.dropped_empty;
        continue;
      }
      if (*start >= *end) {
        RecordError(r.line, "start is not before end");
        continue;
      }
      raw.requests.push_back(RawRequest{
          .id = static_cast<RequestId>(raw.requests.size() + 1),
          .demand = std::move(r.demand),
          .start = *start,
          .end = *end,
      });
    }
    report_.requests = raw.requests.size();
    return IngestResult{ValidateOrThrow(raw), report_};
  }

  const TraceSchema& schema_;
  std::vector<int64_t> capacity_;
  std::unordered_map<std::string, const FlavorRule*> rule_by_flavor_;
  Wide time_scale_ = 1;
  std::vector<std::string> header_;
  size_t start_index_ = 0;
  size_t end_index_ = 0;
  size_t id_index_ = 0;
  size_t time_index_ = 0;
  size_t kind_index_ = 0;
  std::vector<size_t> resource_index_;
  std::vector<std::pair<std::string, std::optional<size_t>>> name_parts_;
  std::vector<PendingRequest> pending_;
  std::unordered_map<std::string, size_t> open_events_;
  IngestReport report_;
};

}  // namespace

int64_t CeilScaledDecimal(std::string_view text, int64_t scale) {
  auto d = ParseDecimal(text);
  if (!d) {
    throw Error(ErrorCode::kParse,
                "invalid decimal '" + std::string(text) + "'");
  }
  auto v = ScaleDecimal(*d, scale, /*round_up=*/true);
  if (!v || *v > std::numeric_limits<int64_t>::max() ||
      *v < std::numeric_limits<int64_t>::min()) {
    throw Error(ErrorCode::kOverflow,
                "scaled decimal out of range: " + std::string(text));
  }
  return static_cast<int64_t>(*v);
}

TraceSchema ParseTraceSchema(std::string_view json) {
  TraceSchema schema;
  try {
    const nlohmann::json doc = nlohmann::json::parse(json);
    const std::string layout = doc.value("layout", "intervals");
    if (layout == "intervals") {
      schema.layout = TraceSchema::Layout::kIntervals;
      schema.start_column = ColumnFromJson(doc.at("start_column"));
      schema.end_column = ColumnFromJson(doc.at("end_column"));
    } else if (layout == "events") {
      schema.layout = TraceSchema::Layout::kEvents;
      schema.id_column = ColumnFromJson(doc.at("id_column"));
      schema.time_column = ColumnFromJson(doc.at("time_column"));
      schema.kind_column = ColumnFromJson(doc.at("kind_column"));
      schema.create_value = doc.value("create_value", "0");
      schema.delete_value = doc.value("delete_value", "1");
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "layout must be 'intervals' or 'events'");
    }
    const std::string delimiter = doc.value("delimiter", ",");
    if (delimiter.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "delimiter must be a single character");
    }
    schema.delimiter = delimiter == "\\t" ? '\t' : delimiter[0];
    schema.header = doc.value("header", true);
    for (const auto& r : doc.at("resources")) {
      ResourceColumn column;
      column.column = ColumnFromJson(r.at("column"));
      column.scale = r.value("scale", int64_t{1});
      const auto& cap = r.at("capacity");
      column.capacity = cap.is_string()
                            ? Rational::Parse(cap.get<std::string>())
                            : Rational(cap.get<int64_t>());
      schema.resources.push_back(std::move(column));
    }
    schema.flavor_name = doc.value("flavor_name", "");
    if (doc.contains("flavor_rules")) {
      for (const auto& r : doc.at("flavor_rules")) {
        schema.flavor_rules.push_back(FlavorRule{
            .flavors = r.at("flavors").get<std::vector<std::string>>(),
            .divide = r.at("divide").get<std::vector<int64_t>>(),
        });
      }
    }
    if (!schema.flavor_rules.empty() && schema.flavor_name.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "flavor_rules require a flavor_name template");
    }
    if (doc.contains("time")) {
      const auto& t = doc.at("time");
      const std::string mode = t.value("mode", "scaled");
      if (mode == "rank") {
        schema.time_mode = TraceSchema::TimeMode::kRank;
      } else if (mode == "scaled") {
        schema.time_mode = TraceSchema::TimeMode::kScaled;
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "time.mode must be 'rank' or 'scaled'");
      }
      schema.time_scale = t.value("scale", int64_t{1});
      if (schema.time_scale < 1) {
        throw Error(ErrorCode::kInvalidArgument, "time.scale must be >= 1");
      }
    }
    const std::string missing = doc.value("missing_end", "drop");
    if (missing == "drop") {
      schema.missing_end = TraceSchema::MissingEnd::kDrop;
    } else if (missing == "error") {
      schema.missing_end = TraceSchema::MissingEnd::kError;
    } else if (missing == "horizon") {
      schema.missing_end = TraceSchema::MissingEnd::kHorizon;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "missing_end must be 'drop', 'error' or 'horizon'");
    }
    schema.drop_empty = doc.value("drop_empty", true);
    schema.max_errors = doc.value("max_errors", size_t{100});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed trace schema: ") + e.what());
  }
  return schema;
}

TraceSchema LoadTraceSchema(const std::string& path) {
  return ParseTraceSchema(ReadFile(path));
}

std::string IngestReport::ToJson() const {
  nlohmann::ordered_json doc;
  doc["rows_read"] = rows_read;
  doc["requests"] = requests;
  doc["dropped_empty"] = dropped_empty;
  doc["dropped_missing_end"] = dropped_missing_end;
  doc["error_rows"] = error_rows;
  doc["errors"] = errors;
  return doc.dump(2) + "\n";
}

IngestResult IngestTrace(std::istream& input, const TraceSchema& schema) {
  TraceIngester ingester(schema);
  return ingester.Run(input);
}

}  // namespace dvbp
