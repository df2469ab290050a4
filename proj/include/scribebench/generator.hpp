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
#include <vector>

#include "scribebench/dataset.hpp"
#include "scribebench/llm_client.hpp"
#include "scribebench/note.hpp"
#include "scribebench/prompt_template.hpp"

namespace scribebench::gen {

inline constexpr std::string_view kDefaultNoteTemplate = "note_default";
inline constexpr std::string_view kTranscriptPlaceholder = "transcript";

// Candidate warning tags.
inline constexpr std::string_view kWarnNoRecognizedSections = "no_recognized_sections";
inline constexpr std::string_view kWarnTruncated = "truncated";

/// One arm of a comparison (e.g. "base_llama" or "ondevice"): which
/// endpoint and model to drive and how.
struct GenerationProfile {
  std::string profile_id;
  llm::ClientConfig client;
  std::string model;
  std::string prompt_template_id = std::string(kDefaultNoteTemplate);
  double temperature = llm::kGenerationTemperature;
  int max_tokens = 2048;
  std::optional<int64_t> seed;

  Json to_json() const;
  static GenerationProfile from_json(std::string profile_id, const Json& j,
                                     const llm::ClientConfig& client_defaults);
  /// SHA-256 of to_json(); stamped on every candidate as gen_config_hash.
  std::string config_hash() const;
};

/// [system, user] messages for one transcript. Throws ValidationError when
/// the template's user text lacks exactly one {{transcript}}.
std::vector<llm::Message> render_prompt(const PromptTemplate& tmpl, const data::TranscriptRecord& transcript,
                                        const note::SectionSchema& schema = note::SectionSchema::default_schema());

/// Calls the model once and parses its output. Unparseable output is still
/// kept (as a BODY section) and tagged with a warning; a length cutoff is
/// tagged "truncated".
data::CandidateRecord generate_note(const data::TranscriptRecord& transcript, const GenerationProfile& profile,
                                    const PromptTemplate& tmpl, llm::ChatClient& client,
                                    const note::SectionSchema& schema);

struct BatchOutcome {
  std::vector<data::CandidateRecord> candidates;  // input order, failures omitted
  std::map<std::string, std::string> failures;    // id -> error
};

/// Generates every record concurrently (bounded by the client's
/// max_concurrency) and returns candidates in input order. Per-record
/// failures are collected rather than thrown.
BatchOutcome generate_batch(const std::vector<data::TranscriptRecord>& dataset, const GenerationProfile& profile,
                            const PromptTemplate& tmpl, llm::ChatClient& client,
                            const note::SectionSchema& schema);

/// Runs generate_batch and atomically writes the candidates file.
BatchOutcome generate_batch_to_file(const std::vector<data::TranscriptRecord>& dataset,
                                    const GenerationProfile& profile, const PromptTemplate& tmpl,
                                    llm::ChatClient& client, const note::SectionSchema& schema,
                                    const std::filesystem::path& out);

}  // namespace scribebench::gen
