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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribebench/dataset.hpp"
#include "scribebench/llm_client.hpp"
#include "scribebench/prompt_template.hpp"

namespace scribebench::judge {

enum class Severity { no, minor, major };

std::string_view to_string(Severity s);  // "No", "Minor", "Major"
/// Case-insensitive match against no/minor/major.
std::optional<Severity> parse_severity(std::string_view text);

inline constexpr size_t kLikertCount = 7;
inline constexpr std::array<std::string_view, kLikertCount> kLikertFields = {
    "factual_correctness",  "completeness", "clinical_relevance", "coherence_organization",
    "terminology_accuracy", "readability",  "overall_quality",
};

struct JudgeAssessment {
  std::array<int, kLikertCount> likert{};  // order of kLikertFields
  bool negation_detection = false;
  Severity hallucination = Severity::no;
  Severity omission = Severity::no;
  std::string rationale;

  int factual_correctness() const { return likert[0]; }
  int overall_quality() const { return likert[6]; }
  /// Throws ValidationError naming the first field out of range.
  void validate() const;
  bool operator==(const JudgeAssessment&) const = default;
};

/// Unweighted mean of the seven Likert dimensions.
double composite_score(const JudgeAssessment& a);

struct JudgeConfig {
  llm::ClientConfig client;
  std::string judge_model = "gpt-4.1-mini-2025-04-14";
  double temperature = llm::kJudgeTemperature;
  bool include_transcript = true;
  int max_reasks = 1;
  int max_tokens = 1024;
  std::string prompt_template_id = "judge_default";

  Json to_json() const;
};

/// Raised when a response cannot be turned into a valid assessment. The
/// message names the offending field.
class JudgeParseError : public ValidationError {
 public:
  JudgeParseError(const std::string& field, const std::string& what)
      : ValidationError(what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses the judge's reply. The reply may wrap the object in prose or a
/// code fence; the span from the first '{' to the last '}' is parsed.
JudgeAssessment parse_judge_response(std::string_view text);

/// Messages for one judgment. With a transcript three documents are
/// embedded and hallucination is grounded in the transcript; without one,
/// two documents and the reference is the grounding source.
std::vector<llm::Message> build_judge_prompt(const std::optional<std::string>& transcript,
                                             const std::string& reference_note,
                                             const std::string& candidate_note, const PromptTemplate& tmpl);

struct JudgeInput {
  std::string id;
  std::string model;
  std::optional<std::string> transcript;
  std::string reference_note;
  std::string candidate_note;
};

struct JudgedRecord {
  std::string id;
  std::string model;
  JudgeAssessment assessment;
  int reask_count = 0;
};

Json to_json(const JudgedRecord& r);
JudgedRecord judged_from_json(const Json& j, std::string_view loc);
std::vector<JudgedRecord> load_judged(const std::filesystem::path& path);

/// One judgment with up to config.max_reasks correction turns. Throws
/// JudgeParseError after the last failed attempt and TransportError on
/// transport failure.
JudgedRecord judge_pair(const JudgeInput& input, const JudgeConfig& config, const PromptTemplate& tmpl,
                        llm::ChatClient& client);

struct JudgeBatchOutcome {
  std::vector<JudgedRecord> judged;             // input order, failures omitted
  std::map<std::string, std::string> failures;  // id -> error
};

JudgeBatchOutcome judge_batch(const std::vector<JudgeInput>& inputs, const JudgeConfig& config,
                              const PromptTemplate& tmpl, llm::ChatClient& client);

/// Joins references, candidates and (optionally) transcripts by id. A
/// candidate without a reference is a ValidationError; the transcript comes
/// from `transcripts` first, then from the reference bundle.
std::vector<JudgeInput> join_inputs(const std::vector<data::ReferencePair>& references,
                                    const std::vector<data::CandidateRecord>& candidates,
                                    const std::vector<data::TranscriptRecord>& transcripts,
                                    bool include_transcript);

}  // namespace scribebench::judge
