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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scribebench/llm_client.hpp"
#include "scribebench/note.hpp"
#include "scribebench/prompt_template.hpp"

namespace scribebench::synth {

struct Topic {
  std::string topic_id;
  std::string title;
  std::string focus;
  bool operator==(const Topic&) const = default;
};

struct CaseContext {
  std::string topic_id;
  std::string description;
};

struct CritiqueResult {
  int completeness = 0;
  int clinical_relevance = 0;
  int realism = 0;
  std::string feedback;
  bool passed = false;

  Json to_json() const;
};

/// Model settings for one pipeline stage.
struct StageProfile {
  std::string model;
  double temperature = llm::kSynthesisTemperature;
  int max_tokens = 4096;
  std::optional<int64_t> seed;

  Json to_json() const;
  static StageProfile from_json(const Json& j, StageProfile defaults);
};

/// Which templates drive each stage. Defaults are the builtin prompts.
struct StagePrompts {
  PromptTemplate topics = PromptTemplate::builtin("synth_topics");
  PromptTemplate context = PromptTemplate::builtin("synth_context");
  PromptTemplate transcript = PromptTemplate::builtin("synth_transcript");
  PromptTemplate critique = PromptTemplate::builtin("synth_critique");
  PromptTemplate revise = PromptTemplate::builtin("synth_revise");
  PromptTemplate note = PromptTemplate::builtin("synth_note");

  static StagePrompts resolve(const std::optional<std::filesystem::path>& dir);
  Json digests() const;
};

struct SynthesisConfig {
  size_t count = 1;
  std::string specialty = "endocrinology";
  int max_revision_iters = 3;
  int pass_threshold = 4;
  size_t topics_per_request = 20;
  StageProfile writer;                                               // topics, contexts, transcripts, revisions
  StageProfile critic{"", llm::kJudgeTemperature, 1024, std::nullopt};
  StageProfile formatter{"", llm::kGenerationTemperature, 4096, std::nullopt};  // note transform
  std::filesystem::path checkpoint_dir;
  /// Stop after this many records (human review gate). Unset: run to count.
  std::optional<size_t> pilot;

  /// Throws UsageError on count < 1, max_revision_iters < 0,
  /// pass_threshold outside 1..5, or missing stage models.
  void validate() const;
  /// Everything that shapes record content. count and pilot are left out so
  /// a run can be extended or resumed past a pilot.
  Json content_json() const;
};

/// True when at least two distinct `Name:` prefixes start lines of `text`.
bool looks_like_dialogue(std::string_view text);

/// Distinct `Name:` line prefixes in order of first appearance.
std::vector<std::string> speaker_labels(std::string_view text);

/// Parses {"topics":[{"title","focus"}]} (embedded in prose or not).
std::vector<std::pair<std::string, std::string>> parse_topics_response(std::string_view text);

/// Parses a critique reply; throws ValidationError naming the bad field.
CritiqueResult parse_critique(std::string_view text, int pass_threshold);

/// Stage operations. Each call goes through `client`, so reruns are served
/// from its cache. Re-requests append a correction turn so they are
/// distinct requests.
std::vector<Topic> generate_topics(size_t n, const SynthesisConfig& config, const StagePrompts& prompts,
                                   llm::ChatClient& client);
CaseContext expand_context(const Topic& topic, const SynthesisConfig& config, const StagePrompts& prompts,
                           llm::ChatClient& client);
std::string synthesize_transcript(const CaseContext& context, const SynthesisConfig& config,
                                  const StagePrompts& prompts, llm::ChatClient& client);
CritiqueResult critique_transcript(const std::string& transcript, const SynthesisConfig& config,
                                   const StagePrompts& prompts, llm::ChatClient& client);
std::string revise_transcript(const std::string& transcript, const CritiqueResult& critique,
                              const SynthesisConfig& config, const StagePrompts& prompts,
                              llm::ChatClient& client);

struct NoteTransform {
  std::string text;
  bool recognized = false;  // false: stored with a warning
};
NoteTransform transform_to_note(const std::string& transcript, const SynthesisConfig& config,
                                const StagePrompts& prompts, const note::SectionSchema& schema,
                                llm::ChatClient& client);

struct SynthRecord {
  std::string id;
  std::string transcript;
  std::string note;
  bool critique_passed = false;
  int revisions = 0;
  std::vector<std::string> warnings;

  Json to_json() const;
};

struct PipelineOutcome {
  std::vector<SynthRecord> records;  // index order
  std::map<size_t, std::string> failures;
  bool stopped_for_pilot = false;
};

/// Runs every stage for records 0..count-1 (or 0..pilot-1), checkpointing
/// each stage's output under `{checkpoint_dir}/{index}/{stage}.out`.
/// Existing checkpoints are reused, so a killed run resumes where it left
/// off. A checkpoint directory written under a different content_json()
/// is refused.
PipelineOutcome run_pipeline(const SynthesisConfig& config, const StagePrompts& prompts,
                             const note::SectionSchema& schema, llm::ChatClient& client);

/// run_pipeline plus an atomic write of the dataset file. Throws
/// RuntimeFailure listing failed record indices (after writing nothing).
PipelineOutcome run_pipeline_to_file(const SynthesisConfig& config, const StagePrompts& prompts,
                                     const note::SectionSchema& schema, llm::ChatClient& client,
                                     const std::filesystem::path& out);

}  // namespace scribebench::synth
