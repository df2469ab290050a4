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

#include "scribebench/prompt_template.hpp"

#include <cctype>

#include <fmt/format.h>

#include "scribebench/builtin_prompts.hpp"
#include "scribebench/util.hpp"

namespace scribebench {
namespace {

constexpr std::string_view kSystemMarker = "=== system ===";
constexpr std::string_view kUserMarker = "=== user ===";

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Position of the next well-formed `{{name}}` at or after `from`.
size_t find_placeholder(std::string_view text, size_t from, std::string_view& name) {
  while (true) {
    size_t open = text.find("{{", from);
    if (open == std::string_view::npos) return open;
    size_t i = open + 2;
    while (i < text.size() && is_name_char(text[i])) ++i;
    if (i > open + 2 && text.substr(i, 2) == "}}") {
      name = text.substr(open + 2, i - open - 2);
      return open;
    }
    from = open + 1;
  }
}

}  // namespace

std::string substitute(std::string_view text, const std::map<std::string, std::string>& values) {
  std::string out;
  size_t pos = 0;
  std::string_view name;
  while (true) {
    size_t at = find_placeholder(text, pos, name);
    if (at == std::string_view::npos) break;
    auto it = values.find(std::string(name));
    if (it == values.end()) {
      throw ValidationError(fmt::format("prompt placeholder {{{{{}}}}} has no value", name));
    }
    out.append(text.substr(pos, at - pos));
    out.append(it->second);
    pos = at + name.size() + 4;
  }
  out.append(text.substr(pos));
  return out;
}

PromptTemplate PromptTemplate::parse(std::string_view text, std::string_view source_name) {
  auto lines = split_lines(text);
  if (lines.empty() || !trim(lines[0]).starts_with("template_id:")) {
    throw ValidationError(fmt::format("{}: first line must be \"template_id: <id>\"", source_name));
  }
  PromptTemplate t;
  t.id_ = std::string(trim(trim(lines[0]).substr(std::string_view("template_id:").size())));
  if (t.id_.empty()) throw ValidationError(fmt::format("{}: empty template_id", source_name));

  std::string* target = nullptr;
  bool saw_system = false;
  bool saw_user = false;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line == kSystemMarker) {
      target = &t.system_;
      saw_system = true;
      continue;
    }
    if (line == kUserMarker) {
      target = &t.user_;
      saw_user = true;
      continue;
    }
    if (!target) {
      if (!line.empty()) {
        throw ValidationError(fmt::format("{}:{}: text before the first section marker", source_name, i + 1));
      }
      continue;
    }
    *target += lines[i];
    *target += '\n';
  }
  if (!saw_system || !saw_user) {
    throw ValidationError(fmt::format("{}: needs both \"{}\" and \"{}\" sections", source_name,
                                      kSystemMarker, kUserMarker));
  }
  t.system_ = std::string(trim(t.system_));
  t.user_ = std::string(trim(t.user_));
  return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

PromptTemplate PromptTemplate::builtin(std::string_view name) {
  for (const auto& [stem, text] : prompts::kBuiltin) {
    if (stem == name) return parse(text, fmt::format("builtin:{}", name));
  }
  throw UsageError(fmt::format("unknown prompt template \"{}\"", name));
}

std::vector<std::string> PromptTemplate::builtin_names() {
  std::vector<std::string> names;
  for (const auto& entry : prompts::kBuiltin) names.emplace_back(entry.first);
  return names;
}

PromptTemplate PromptTemplate::resolve(std::string_view template_id,
                                       const std::optional<std::filesystem::path>& dir) {
  if (dir) {
    auto path = *dir / (std::string(template_id) + ".txt");
    if (std::filesystem::exists(path)) {
      PromptTemplate t = load(path);
      if (t.id() != template_id) {
        throw ValidationError(fmt::format("{}: template_id is \"{}\", expected \"{}\"", path.string(),
                                          t.id(), template_id));
      }
      return t;
    }
  }
  return builtin(template_id);
}

size_t PromptTemplate::occurrences(std::string_view placeholder) const {
  size_t count = 0;
  for (const std::string* text : {&system_, &user_}) {
    size_t pos = 0;
    std::string_view name;
    while ((pos = find_placeholder(*text, pos, name)) != std::string_view::npos) {
      if (name == placeholder) ++count;
      pos += 2;
    }
  }
  return count;
}

void PromptTemplate::require_once_in_user(std::string_view placeholder) const {
  size_t in_user = 0;
  size_t pos = 0;
  std::string_view name;
  while ((pos = find_placeholder(user_, pos, name)) != std::string_view::npos) {
    if (name == placeholder) ++in_user;
    pos += 2;
  }
  if (in_user != 1 || occurrences(placeholder) != 1) {
    throw ValidationError(fmt::format(
        "prompt template \"{}\": user text must contain {{{{{}}}}} exactly once (found {})", id_,
        placeholder, in_user));
  }
}

std::vector<llm::Message> PromptTemplate::render(const std::map<std::string, std::string>& values) const {
  return {{llm::Role::system, substitute(system_, values)}, {llm::Role::user, substitute(user_, values)}};
}

std::string PromptTemplate::digest() const {
  return sha256_hex(fmt::format("{}\n{}\n{}", id_, system_, user_));
}

}  // namespace scribebench
