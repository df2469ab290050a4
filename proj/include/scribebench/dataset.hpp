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
#include <variant>
#include <vector>

#include "scribebench/jsonl.hpp"
#include "scribebench/note.hpp"

namespace scribebench::data {

enum class Source { internal_eval, aci_bench, synthetic, other };

std::string_view to_string(Source source);
std::optional<Source> parse_source(std::string_view text);

struct TranscriptRecord {
  std::string id;
  std::string transcript;
  Source source = Source::other;
  std::map<std::string, std::string> metadata;
};

/// A reference note, optionally carrying its source transcript when the
/// reference file bundles both (as published evaluation sets do).
struct ReferencePair {
  std::string id;
  std::optional<TranscriptRecord> transcript;
  note::StructuredNote reference_note;
};

struct CandidateRecord {
  std::string id;
  std::string model;
  note::StructuredNote note;  // note.raw is the verbatim model text
  std::string gen_config_hash;
  std::vector<std::string> warnings;
};

enum class DatasetKind { transcripts, references, candidates };

template <typename T>
struct Loaded {
  std::vector<T> records;
  std::vector<std::string> warnings;
};

using AnyDataset =
    std::variant<Loaded<TranscriptRecord>, Loaded<ReferencePair>, Loaded<CandidateRecord>>;

/// Loaders validate ids (non-empty, unique), required fields, and field
/// types. Errors are ValidationError with file and line numbers. An empty
/// file yields no records and one warning.
Loaded<TranscriptRecord> load_transcripts(const std::filesystem::path& path);
Loaded<ReferencePair> load_references(const std::filesystem::path& path,
                                      const note::SectionSchema& schema);
Loaded<CandidateRecord> load_candidates(const std::filesystem::path& path,
                                        const note::SectionSchema& schema);
AnyDataset load_dataset(const std::filesystem::path& path, DatasetKind kind,
                        const note::SectionSchema& schema = note::SectionSchema::default_schema());

Json to_json(const TranscriptRecord& r);
Json to_json(const ReferencePair& r);
Json to_json(const CandidateRecord& r);

template <typename T>
std::string serialize_records(const std::vector<T>& records) {
  std::string out;
  for (const auto& r : records) {
    out += jsonl::dump(to_json(r));
    out += '\n';
  }
  return out;
}

}  // namespace scribebench::data
