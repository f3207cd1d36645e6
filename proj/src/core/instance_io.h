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

// Canonical instance file formats. Text: "d n", the d capacity integers, then
// n rows "a_1 ... a_d start end". JSON: {"capacity": [...], "requests":
// [...]} where each request is either an object with "demand", "start",
// "end" and an optional "id", or a flat array [a_1, ..., a_d, start, end].

#ifndef DVBP_CORE_INSTANCE_IO_H_
#define DVBP_CORE_INSTANCE_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "core/model.h"

namespace dvbp {

enum class InstanceFormat { kText, kJson };

// Parses either format (detected from the first non-blank character) without
// validating. Syntax errors carry line numbers.
RawInstance ParseRawInstance(std::string_view text);

// Parses and validates. Validation failures raise ErrorCode::kValidation.
Instance ParseInstance(std::string_view text,
                       const ValidateOptions& options = {});
Instance LoadInstanceFile(const std::string& path,
                          const ValidateOptions& options = {});

// The text format has no id column: ids are implied by row order. The JSON
// form keeps ids.
std::string FormatInstance(const Instance& instance, InstanceFormat format);

// FNV-1a over the text serialization and the id list, as 16 hex digits.
std::string Fingerprint(const Instance& instance);

}  // namespace dvbp

#endif  // DVBP_CORE_INSTANCE_IO_H_
