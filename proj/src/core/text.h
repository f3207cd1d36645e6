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

// Small text helpers shared by the parsers.

#ifndef DVBP_CORE_TEXT_H_
#define DVBP_CORE_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dvbp {

std::string_view Trim(std::string_view text);
std::vector<std::string_view> Split(std::string_view text, char delimiter);
// Splits on runs of spaces and tabs.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

// Returns '\0' if there is none.
char FirstNonBlank(std::string_view text);

// Throws Error(kParse) mentioning `line` (when non-zero) on bad input.
int64_t ParseInt64(std::string_view token, size_t line = 0);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// Iterates over lines of an in-memory buffer, tracking 1-based numbers and
// stripping a trailing '\r'.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool Next(std::string_view& line);
  size_t line_number() const { return line_number_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  size_t line_number_ = 0;
};

}  // namespace dvbp

#endif  // DVBP_CORE_TEXT_H_
