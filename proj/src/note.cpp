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

#include "scribebench/note.hpp"

#include <cctype>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "scribebench/errors.hpp"
#include "scribebench/util.hpp"

namespace scribebench::note {
namespace {

const std::regex& heading_regex() {
  static const std::regex re(R"(^\s*(##\s+(.+?)\s*|\*\*(.+?):?\*\*)\s*$)");
  return re;
}

// Drops whitespace-only lines at both ends; interior text is kept verbatim.
std::string join_body(const std::vector<std::string>& lines) {
  size_t b = 0;
  size_t e = lines.size();
  while (b < e && trim(lines[b]).empty()) ++b;
  while (e > b && trim(lines[e - 1]).empty()) --e;
  std::string out;
  for (size_t i = b; i < e; ++i) {
    if (i > b) out += '\n';
    out += lines[i];
  }
  return out;
}

void append_body(std::string& into, const std::string& more) {
  if (more.empty()) return;
  if (!into.empty()) into += "\n\n";
  into += more;
}

}  // namespace

SectionSchema::SectionSchema(std::vector<std::string> canonical,
                             std::map<std::string, std::string> aliases)
    : canonical_(std::move(canonical)), aliases_(std::move(aliases)) {
  for (const auto& heading : canonical_) {
    std::string key = lookup_key(heading);
    if (key.empty()) {
      throw ValidationError(fmt::format("section schema: heading \"{}\" is blank", heading));
    }
    if (!index_.emplace(key, heading).second) {
      throw ValidationError(fmt::format("section schema: duplicate canonical heading \"{}\"", heading));
    }
  }
  for (const auto& [alias, target] : aliases_) {
    auto canon = index_.find(lookup_key(target));
    if (canon == index_.end() || canon->second != target) {
      throw ValidationError(fmt::format(
          "section schema: alias \"{}\" targets unknown heading \"{}\"", alias, target));
    }
    std::string key = lookup_key(alias);
    auto [it, inserted] = index_.emplace(key, target);
    if (!inserted && it->second != target) {
      throw ValidationError(fmt::format(
          "section schema: alias \"{}\" maps to both \"{}\" and \"{}\"", alias, it->second, target));
    }
  }
}

const SectionSchema& SectionSchema::default_schema() {
  static const SectionSchema schema(
      {"Chief Complaint", "History of Present Illness", "Review of Systems",
       "Past Medical History", "Medications", "Allergies", "Physical Examination",
       "Laboratory and Diagnostic Results", "Assessment", "Plan", "Follow-up"},
      {
          {"CC", "Chief Complaint"},
          {"Chief Complaints", "Chief Complaint"},
          {"Reason for Visit", "Chief Complaint"},
          {"HPI", "History of Present Illness"},
          {"History of Present Illnesses", "History of Present Illness"},
          {"Present Illness", "History of Present Illness"},
          {"ROS", "Review of Systems"},
          {"PMH", "Past Medical History"},
          {"Medical History", "Past Medical History"},
          {"Past History", "Past Medical History"},
          {"Meds", "Medications"},
          {"Medication", "Medications"},
          {"Current Medications", "Medications"},
          {"Medication List", "Medications"},
          {"Allergy", "Allergies"},
          {"Drug Allergies", "Allergies"},
          {"PE", "Physical Examination"},
          {"Exam", "Physical Examination"},
          {"Examination", "Physical Examination"},
          {"Physical Exam", "Physical Examination"},
          {"Labs", "Laboratory and Diagnostic Results"},
          {"Lab Results", "Laboratory and Diagnostic Results"},
          {"Laboratory Results", "Laboratory and Diagnostic Results"},
          {"Laboratory Data", "Laboratory and Diagnostic Results"},
          {"Diagnostic Results", "Laboratory and Diagnostic Results"},
          {"Labs and Imaging", "Laboratory and Diagnostic Results"},
          {"Investigations", "Laboratory and Diagnostic Results"},
          {"Impression", "Assessment"},
          {"Assessment and Plan", "Assessment"},
          {"Diagnosis", "Assessment"},
          {"Treatment Plan", "Plan"},
          {"Plan of Care", "Plan"},
          {"Recommendations", "Plan"},
          {"Followup", "Follow-up"},
          {"Follow-up Plan", "Follow-up"},
          {"Follow-up Instructions", "Follow-up"},
      });
  return schema;
}

SectionSchema SectionSchema::from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("canonical") || !doc["canonical"].is_array()) {
    throw ValidationError("section schema: expected an object with a \"canonical\" array");
  }
  std::vector<std::string> canonical;
  for (const auto& h : doc["canonical"]) {
    if (!h.is_string()) throw ValidationError("section schema: canonical headings must be strings");
    canonical.push_back(h.get<std::string>());
  }
  std::map<std::string, std::string> aliases;
  if (doc.contains("aliases")) {
    if (!doc["aliases"].is_object()) throw ValidationError("section schema: \"aliases\" must be an object");
    for (const auto& [alias, target] : doc["aliases"].items()) {
      if (!target.is_string()) throw ValidationError("section schema: alias targets must be strings");
      aliases.emplace(alias, target.get<std::string>());
    }
  }
  return SectionSchema(std::move(canonical), std::move(aliases));
}

SectionSchema SectionSchema::load(const std::filesystem::path& path) {
  try {
    return from_json(Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Json SectionSchema::to_json() const {
  Json doc;
  doc["canonical"] = canonical_;
  Json aliases = Json::object();
  for (const auto& [alias, target] : aliases_) aliases[alias] = target;
  doc["aliases"] = std::move(aliases);
  return doc;
}

std::string SectionSchema::lookup_key(std::string_view surface) {
  std::string key;
  bool pending_space = false;
  for (char c : surface) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || std::ispunct(uc)) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) key += ' ';
    pending_space = false;
    key += static_cast<char>(std::tolower(uc));
  }
  return key;
}

std::optional<std::string> SectionSchema::normalize(std::string_view surface) const {
  auto it = index_.find(lookup_key(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool StructuredNote::has_recognized_section() const {
  for (const auto& s : sections) {
    if (s.recognized) return true;
  }
  return false;
}

const NoteSection* StructuredNote::find(std::string_view heading) const {
  for (const auto& s : sections) {
    if (s.heading == heading) return &s;
  }
  return nullptr;
}

std::optional<std::string> match_heading(std::string_view line) {
  std::string_view lead = trim(line);
  if (lead.size() < 3 || !(lead.starts_with("##") || lead.starts_with("**"))) {
    return std::nullopt;
  }
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, heading_regex())) {
    return std::nullopt;
  }
  const auto& captured = m[2].matched ? m[2] : m[3];
  std::string heading(trim(std::string_view(&*captured.first, captured.length())));
  if (heading.empty()) return std::nullopt;
  return heading;
}

std::optional<std::string> normalize_heading(std::string_view surface, const SectionSchema& schema) {
  return schema.normalize(surface);
}

StructuredNote parse_note(std::string_view raw, const SectionSchema& schema) {
  struct Pending {
    std::string surface;
    std::vector<std::string> lines;
  };
  std::vector<std::string> preamble;
  std::vector<Pending> pending;
  for (auto& line : split_lines(raw)) {
    if (auto heading = match_heading(line)) {
      pending.push_back({std::move(*heading), {}});
    } else if (pending.empty()) {
      preamble.push_back(std::move(line));
    } else {
      pending.back().lines.push_back(std::move(line));
    }
  }

  StructuredNote note;
  note.raw = std::string(raw);
  std::string pre = join_body(preamble);
  if (pending.empty() || !pre.empty()) {
    note.sections.push_back({std::string(kBodyHeading), std::move(pre), false});
  }
  for (auto& p : pending) {
    std::string body = join_body(p.lines);
    if (auto canonical = schema.normalize(p.surface)) {
      auto dup = std::find_if(note.sections.begin(), note.sections.end(), [&](const NoteSection& s) {
        return s.recognized && s.heading == *canonical;
      });
      if (dup != note.sections.end()) {
        append_body(dup->body, body);
      } else {
        note.sections.push_back({std::move(*canonical), std::move(body), true});
      }
    } else {
      note.sections.push_back({std::move(p.surface), std::move(body), false});
    }
  }
  return note;
}

std::string serialize_note(const StructuredNote& note) {
  std::string out;
  for (const auto& s : note.sections) {
    out += "## ";
    out += s.heading;
    out += '\n';
    out += s.body;
    out += "\n\n";
  }
  return out;
}

}  // namespace scribebench::note
