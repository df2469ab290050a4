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

#include "scribebench/dataset.hpp"

#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/errors.hpp"
#include "scribebench/util.hpp"

namespace scribebench::data {
namespace {

std::string where(const std::filesystem::path& path, size_t line) {
  return fmt::format("{}:{}", path.string(), line);
}

class IdRegistry {
 public:
  explicit IdRegistry(const std::filesystem::path& path) : path_(path) {}

  const std::string& claim(const Json& obj, size_t line) {
    const std::string& id = jsonl::require_string(obj, "id", where(path_, line));
    if (trim(id).empty()) {
      throw ValidationError(fmt::format("{}: field \"id\" is empty", where(path_, line)));
    }
    auto [it, inserted] = first_seen_.emplace(id, line);
    if (!inserted) {
      throw ValidationError(fmt::format("{}: duplicate id \"{}\" on lines {} and {}",
                                        path_.string(), id, it->second, line));
    }
    return id;
  }

 private:
  const std::filesystem::path& path_;
  std::unordered_map<std::string, size_t> first_seen_;
};

template <typename T>
void warn_if_empty(Loaded<T>& loaded, const std::filesystem::path& path) {
  if (loaded.records.empty()) {
    loaded.warnings.push_back(fmt::format("{}: no records", path.string()));
    spdlog::warn("{}: no records", path.string());
  }
}

Source source_field(const Json& obj, const std::string& loc) {
  auto it = obj.find("source");
  if (it == obj.end() || it->is_null()) return Source::other;
  if (!it->is_string()) {
    throw ValidationError(fmt::format("{}: field \"source\" must be a string", loc));
  }
  auto parsed = parse_source(it->get_ref<const std::string&>());
  if (!parsed) {
    throw ValidationError(fmt::format("{}: unknown source \"{}\"", loc, it->get<std::string>()));
  }
  return *parsed;
}

TranscriptRecord transcript_from(const Json& obj, std::string id, const std::string& loc) {
  TranscriptRecord r;
  r.id = std::move(id);
  r.transcript = jsonl::require_string(obj, "transcript", loc);
  if (trim(r.transcript).empty()) {
    throw ValidationError(fmt::format("{}: transcript is empty", loc));
  }
  r.source = source_field(obj, loc);
  if (auto it = obj.find("metadata"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError(fmt::format("{}: \"metadata\" must be an object", loc));
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) {
        throw ValidationError(fmt::format("{}: metadata value \"{}\" must be a string", loc, k));
      }
      r.metadata.emplace(k, v.get<std::string>());
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(Source source) {
  switch (source) {
    case Source::internal_eval: return "internal_eval";
    case Source::aci_bench: return "aci_bench";
    case Source::synthetic: return "synthetic";
    case Source::other: return "other";
  }
  return "other";
}

std::optional<Source> parse_source(std::string_view text) {
  for (Source s : {Source::internal_eval, Source::aci_bench, Source::synthetic, Source::other}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

Loaded<TranscriptRecord> load_transcripts(const std::filesystem::path& path) {
  Loaded<TranscriptRecord> out;
  IdRegistry ids(path);
  for (const auto& line : jsonl::read(path)) {
    std::string loc = where(path, line.number);
    std::string id = ids.claim(line.value, line.number);
    out.records.push_back(transcript_from(line.value, std::move(id), loc));
  }
  warn_if_empty(out, path);
  return out;
}

Loaded<ReferencePair> load_references(const std::filesystem::path& path,
                                      const note::SectionSchema& schema) {
  Loaded<ReferencePair> out;
  IdRegistry ids(path);
  for (const auto& line : jsonl::read(path)) {
    std::string loc = where(path, line.number);
    ReferencePair pair;
    pair.id = ids.claim(line.value, line.number);
    const std::string& text = jsonl::require_string(line.value, "note", loc);
    if (trim(text).empty()) throw ValidationError(fmt::format("{}: reference note is empty", loc));
    pair.reference_note = note::parse_note(text, schema);
    if (line.value.contains("transcript")) {
      pair.transcript = transcript_from(line.value, pair.id, loc);
    }
    out.records.push_back(std::move(pair));
  }
  warn_if_empty(out, path);
  return out;
}

Loaded<CandidateRecord> load_candidates(const std::filesystem::path& path,
                                        const note::SectionSchema& schema) {
  Loaded<CandidateRecord> out;
  IdRegistry ids(path);
  for (const auto& line : jsonl::read(path)) {
    std::string loc = where(path, line.number);
    CandidateRecord c;
    c.id = ids.claim(line.value, line.number);
    c.model = jsonl::require_string(line.value, "model", loc);
    c.note = note::parse_note(jsonl::require_string(line.value, "note", loc), schema);
    c.gen_config_hash = jsonl::require_string(line.value, "gen_config_hash", loc);
    if (auto it = line.value.find("warnings"); it != line.value.end() && !it->is_null()) {
      if (!it->is_array()) throw ValidationError(fmt::format("{}: \"warnings\" must be an array", loc));
      for (const auto& w : *it) {
        if (!w.is_string()) throw ValidationError(fmt::format("{}: warnings must be strings", loc));
        c.warnings.push_back(w.get<std::string>());
      }
    }
    out.records.push_back(std::move(c));
  }
  warn_if_empty(out, path);
  return out;
}

AnyDataset load_dataset(const std::filesystem::path& path, DatasetKind kind,
                        const note::SectionSchema& schema) {
  switch (kind) {
    case DatasetKind::transcripts: return load_transcripts(path);
    case DatasetKind::references: return load_references(path, schema);
    case DatasetKind::candidates: return load_candidates(path, schema);
  }
  throw UsageError("unknown dataset kind");
}

Json to_json(const TranscriptRecord& r) {
  Json j;
  j["id"] = r.id;
  j["transcript"] = r.transcript;
  j["source"] = std::string(to_string(r.source));
  if (!r.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  return j;
}

Json to_json(const ReferencePair& r) {
  Json j;
  j["id"] = r.id;
  j["note"] = r.reference_note.raw;
  if (r.transcript) {
    j["transcript"] = r.transcript->transcript;
    j["source"] = std::string(to_string(r.transcript->source));
    if (!r.transcript->metadata.empty()) {
      Json meta = Json::object();
      for (const auto& [k, v] : r.transcript->metadata) meta[k] = v;
      j["metadata"] = std::move(meta);
    }
  }
  return j;
}

Json to_json(const CandidateRecord& r) {
  Json j;
  j["id"] = r.id;
  j["model"] = r.model;
  j["note"] = r.note.raw;
  j["gen_config_hash"] = r.gen_config_hash;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace scribebench::data
