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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribebench/llm_client.hpp"

namespace scribebench {

/// A system + user prompt pair stored as a plain-text file:
///
///   template_id: note_default
///   === system ===
///   ...
///   === user ===
///   ... {{transcript}} ...
///
/// Placeholders are `{{name}}` and are substituted in a single pass, so
/// placeholder-looking text inside substituted values is never expanded.
class PromptTemplate {
 public:
  static PromptTemplate parse(std::string_view text, std::string_view source_name);
  static PromptTemplate load(const std::filesystem::path& path);
  /// Template compiled in from the prompts/ directory; throws UsageError
  /// for an unknown name.
  static PromptTemplate builtin(std::string_view name);
  static std::vector<std::string> builtin_names();

  /// Loads `<dir>/<template_id>.txt` when `dir` is set and holds that file,
  /// otherwise the builtin of that name.
  static PromptTemplate resolve(std::string_view template_id,
                                const std::optional<std::filesystem::path>& dir);

  const std::string& id() const { return id_; }
  const std::string& system_text() const { return system_; }
  const std::string& user_text() const { return user_; }

  size_t occurrences(std::string_view placeholder) const;

  /// ValidationError unless the user text holds `{{placeholder}}` exactly once.
  void require_once_in_user(std::string_view placeholder) const;

  /// [system, user] messages with placeholders substituted. Placeholders
  /// without a value are an error.
  std::vector<llm::Message> render(const std::map<std::string, std::string>& values) const;

  std::string digest() const;

 private:
  std::string id_;
  std::string system_;
  std::string user_;
};

/// Single-pass `{{name}}` substitution. Throws ValidationError naming any
/// placeholder missing from `values`.
std::string substitute(std::string_view text, const std::map<std::string, std::string>& values);

}  // namespace scribebench
