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

#include "core/instance_io.h"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "core/error.h"
#include "core/text.h"

namespace dvbp {
namespace {

RawInstance ParseTextInstance(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  auto next_content_line = [&]() -> bool {
    while (reader.Next(line)) {
      line = Trim(line);
      if (!line.empty() && line.front() != '#') return true;
    }
    return false;
  };
  auto fail = [&reader](const std::string& message) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(reader.line_number()) + ": " +
                    message);
  };

  if (!next_content_line()) {
    throw Error(ErrorCode::kParse, "line 1: missing header 'd n'");
  }
  auto header = SplitWhitespace(line);
  if (header.size() != 2) fail("expected header 'd n'");
  const int64_t d = ParseInt64(header[0], reader.line_number());
  const int64_t n = ParseInt64(header[1], reader.line_number());
  if (d < 1) fail("dimension must be at least 1");
  if (n < 0) fail("request count must be non-negative");

  RawInstance raw;
  if (!next_content_line()) fail("missing capacity line");
  auto capacity = SplitWhitespace(line);
  if (capacity.size() != static_cast<size_t>(d)) {
    fail("expected " + std::to_string(d) + " capacity values, got " +
         std::to_string(capacity.size()));
  }
  for (auto token : capacity) {
    raw.capacity.push_back(ParseInt64(token, reader.line_number()));
  }

  raw.requests.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    if (!next_content_line()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(reader.line_number() + 1) +
                      ": expected " + std::to_string(n) + " requests, found " +
                      std::to_string(i));
    }
    auto tokens = SplitWhitespace(line);
    if (tokens.size() != static_cast<size_t>(d + 2)) {
      fail("expected " + std::to_string(d + 2) + " fields (" +
           std::to_string(d) + " demands, start, end), got " +
           std::to_string(tokens.size()));
    }
    RawRequest request;
    for (int64_t j = 0; j < d; ++j) {
      request.demand.push_back(ParseInt64(tokens[j], reader.line_number()));
    }
    request.start = ParseInt64(tokens[d], reader.line_number());
    request.end = ParseInt64(tokens[d + 1], reader.line_number());
    raw.requests.push_back(std::move(request));
  }
  if (next_content_line()) fail("unexpected content after the last request");
  return raw;
}

RawInstance ParseJsonInstance(std::string_view text) {
  RawInstance raw;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    raw.capacity = doc.at("capacity").get<std::vector<int64_t>>();
    const size_t d = raw.capacity.size();
    for (const auto& entry : doc.at("requests")) {
      RawRequest request;
      if (entry.is_array()) {
        auto values = entry.get<std::vector<int64_t>>();
        if (values.size() != d + 2) {
          throw Error(ErrorCode::kParse,
                      "request array must hold " + std::to_string(d + 2) +
                          " integers");
        }
        request.demand.assign(values.begin(), values.begin() + d);
        request.start = values[d];
        request.end = values[d + 1];
      } else {
        if (entry.contains("id")) request.id = entry["id"].get<int64_t>();
        request.demand = entry.at("demand").get<std::vector<int64_t>>();
        request.start = entry.at("start").get<int64_t>();
        request.end = entry.at("end").get<int64_t>();
      }
      raw.requests.push_back(std::move(request));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed instance JSON: ") + e.what());
  }
  return raw;
}

}  // namespace

RawInstance ParseRawInstance(std::string_view text) {
  if (FirstNonBlank(text) == '{') return ParseJsonInstance(text);
  return ParseTextInstance(text);
}

Instance ParseInstance(std::string_view text, const ValidateOptions& options) {
  return ValidateOrThrow(ParseRawInstance(text), options);
}

Instance LoadInstanceFile(const std::string& path,
                          const ValidateOptions& options) {
  return ParseInstance(ReadFile(path), options);
}

std::string FormatInstance(const Instance& instance, InstanceFormat format) {
  const ResourceVector& cap = instance.capacity();
  std::string out;
  if (format == InstanceFormat::kText) {
    out.reserve(16 * (instance.size() + 1) * (instance.dimension() + 2));
    out += std::to_string(instance.dimension()) + " " +
           std::to_string(instance.size()) + "\n";
    for (size_t j = 0; j < cap.dimension(); ++j) {
      if (j > 0) out += ' ';
      out += std::to_string(cap[j]);
    }
    out += '\n';
    for (const Request& r : instance.requests()) {
      for (size_t j = 0; j < r.demand.dimension(); ++j) {
        out += std::to_string(r.demand[j]);
        out += ' ';
      }
      out += std::to_string(r.start);
      out += ' ';
      out += std::to_string(r.end);
      out += '\n';
    }
    return out;
  }

  // One request per line keeps large files diffable.
  auto vector_json = [](const ResourceVector& v) {
    std::string s = "[";
    for (size_t j = 0; j < v.dimension(); ++j) {
      if (j > 0) s += ",";
      s += std::to_string(v[j]);
    }
    return s + "]";
  };
  out += "{\n  \"capacity\": " + vector_json(cap) + ",\n  \"requests\": [";
  for (size_t i = 0; i < instance.size(); ++i) {
    const Request& r = instance.request(i);
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"id\": " + std::to_string(r.id) +
           ", \"demand\": " + vector_json(r.demand) +
           ", \"start\": " + std::to_string(r.start) +
           ", \"end\": " + std::to_string(r.end) + "}";
  }
  out += instance.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string Fingerprint(const Instance& instance) {
  uint64_t hash = 14695981039346656037ULL;
  auto mix = [&hash](std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
  };
  mix(FormatInstance(instance, InstanceFormat::kText));
  for (const Request& r : instance.requests()) {
    mix(std::to_string(r.id));
    mix(",");
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace dvbp
