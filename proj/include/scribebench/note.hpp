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

#include "scribebench/jsonl.hpp"

namespace scribebench::note {

/// Heading used for text that precedes the first heading line, or for a
/// note that has no heading lines at all.
inline constexpr std::string_view kBodyHeading = "BODY";

/// Canonical clinical sections plus case-insensitive aliases.
///
/// Lookups go through a key that lowercases the surface text, turns every
/// ASCII punctuation character into a space, and collapses whitespace, so
/// "HPI:", "hpi" and " H.P.I " style variants land on the same entry as long
/// as the alias table has the matching key.
class SectionSchema {
 public:
  /// Throws ValidationError on duplicate canonical headings, aliases that
  /// target an unknown heading, or an alias that collides with another
  /// canonical heading.
  SectionSchema(std::vector<std::string> canonical, std::map<std::string, std::string> aliases);

  static const SectionSchema& default_schema();

  /// `{"canonical": [...], "aliases": {"HPI": "History of Present Illness"}}`
  static SectionSchema from_json(const Json& doc);
  static SectionSchema load(const std::filesystem::path& path);
  Json to_json() const;

  /// Canonical heading for `surface`, or nullopt when the schema does not
  /// know it.
  std::optional<std::string> normalize(std::string_view surface) const;

  const std::vector<std::string>& canonical() const { return canonical_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  static std::string lookup_key(std::string_view surface);

 private:
  std::vector<std::string> canonical_;
  std::map<std::string, std::string> aliases_;
  std::map<std::string, std::string> index_;  // lookup key -> canonical
};

struct NoteSection {
  std::string heading;  // canonical when recognized, else verbatim
  std::string body;
  bool recognized = false;

  bool operator==(const NoteSection&) const = default;
};

struct StructuredNote {
  std::vector<NoteSection> sections;
  std::string raw;

  bool has_recognized_section() const;
  const NoteSection* find(std::string_view heading) const;
};

/// Surface heading text if `line` is a heading line, else nullopt.
std::optional<std::string> match_heading(std::string_view line);

/// Splits note text into sections in document order. Total: any input
/// yields at least one section. Repeated canonical headings are merged into
/// the first occurrence with a blank line between bodies.
StructuredNote parse_note(std::string_view raw, const SectionSchema& schema);

/// "## <heading>\n<body>\n\n" per section.
std::string serialize_note(const StructuredNote& note);

std::optional<std::string> normalize_heading(std::string_view surface, const SectionSchema& schema);

}  // namespace scribebench::note
