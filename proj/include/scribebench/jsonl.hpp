// Copyright 2026 The ScribeBench Authors.
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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace scribebench {

/// Insertion-ordered JSON keeps every emitted record's key order fixed,
/// which the byte-identical rerun guarantees depend on.
using Json = nlohmann::ordered_json;

namespace jsonl {

struct Line {
  size_t number = 0;  // 1-based line number in the source file
  Json value;
};

/// Parses a line-delimited JSON file. Blank lines are skipped; every other
/// line must hold one JSON object or a ValidationError naming the line is
/// thrown.
std::vector<Line> read(const std::filesystem::path& path);
std::vector<Line> parse(std::string_view text, std::string_view source_name);

/// Compact single-line serialization; invalid UTF-8 is replaced, not thrown.
std::string dump(const Json& value);
std::string dump_lines(const std::vector<Json>& values);

/// Field accessors that raise ValidationError with `where` as location.
const std::string& require_string(const Json& obj, std::string_view key, std::string_view where);
double require_number(const Json& obj, std::string_view key, std::string_view where);

}  // namespace jsonl
}  // namespace scribebench
