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

#include "scribebench/jsonl.hpp"

#include <fmt/format.h>

#include "scribebench/errors.hpp"
#include "scribebench/util.hpp"

namespace scribebench::jsonl {

std::vector<Line> parse(std::string_view text, std::string_view source_name) {
  std::vector<Line> out;
  size_t number = 0;
  for (const std::string& raw : split_lines(text)) {
    ++number;
    if (trim(raw).empty()) continue;
    Json value;
    try {
      value = Json::parse(raw);
    } catch (const Json::parse_error& e) {
      throw ValidationError(
          fmt::format("{}:{}: malformed line: {}", source_name, number, e.what()));
    }
    if (!value.is_object()) {
      throw ValidationError(
          fmt::format("{}:{}: malformed line: expected a JSON object", source_name, number));
    }
    out.push_back({number, std::move(value)});
  }
  return out;
}

std::vector<Line> read(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

std::string dump(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string dump_lines(const std::vector<Json>& values) {
  std::string out;
  for (const Json& v : values) {
    out += dump(v);
    out += '\n';
  }
  return out;
}

const std::string& require_string(const Json& obj, std::string_view key, std::string_view where) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) {
    throw ValidationError(fmt::format("{}: missing field \"{}\"", where, key));
  }
  if (!it->is_string()) {
    throw ValidationError(fmt::format("{}: field \"{}\" must be a string", where, key));
  }
  return it->get_ref<const std::string&>();
}

double require_number(const Json& obj, std::string_view key, std::string_view where) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) {
    throw ValidationError(fmt::format("{}: missing field \"{}\"", where, key));
  }
  if (!it->is_number()) {
    throw ValidationError(fmt::format("{}: field \"{}\" must be a number", where, key));
  }
  return it->get<double>();
}

}  // namespace scribebench::jsonl
