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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scribebench/bertscore.hpp"
#include "scribebench/dataset.hpp"
#include "scribebench/external_scores.hpp"
#include "scribebench/rouge.hpp"

namespace scribebench::report {

/// One line of a scores file.
struct ScoreRow {
  std::string id;
  std::string model;
  std::optional<rouge::RougeSuite> rouge;
  std::optional<embed::BertScoreResult> bertscore;
  std::optional<double> bleurt;
};

Json to_json(const ScoreRow& row);
ScoreRow score_from_json(const Json& j, std::string_view loc);
std::vector<ScoreRow> load_scores(const std::filesystem::path& path);

enum class Metric { rouge, bertscore };

/// Parses a comma-separated metric list ("rouge,bertscore"). Throws
/// UsageError on unknown or empty names.
std::set<Metric> parse_metrics(std::string_view list);

struct EvaluateOptions {
  std::set<Metric> metrics = {Metric::rouge, Metric::bertscore};
  rouge::RougeConfig rouge_config;
  embed::EmbeddingBackend* backend = nullptr;  // required for bertscore
  const embed::IdfTable* idf = nullptr;
  const embed::ExternalScores* external = nullptr;  // fills `bleurt`
  size_t workers = 1;
};

struct EvaluateOutcome {
  std::vector<ScoreRow> rows;  // candidate order
  std::vector<std::string> warnings;
};

/// Scores every candidate against the reference with the same id, using
/// the raw note text of both. A candidate without a reference is a
/// ValidationError listing the orphan ids.
EvaluateOutcome evaluate_pairs(const std::vector<data::ReferencePair>& references,
                               const std::vector<data::CandidateRecord>& candidates, const EvaluateOptions& options);

}  // namespace scribebench::report
