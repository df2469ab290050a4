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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribebench/judge.hpp"
#include "scribebench/scores.hpp"

namespace scribebench::report {

/// Identifies one aggregated quantity. The order here is the column order
/// of the rendered tables.
enum class Field {
  rouge1,
  rouge2,
  rougeL,
  rougeLsum,
  bertscore_p,
  bertscore_r,
  bertscore_f1,
  bleurt,
  factual_correctness,
  completeness,
  clinical_relevance,
  coherence_organization,
  terminology_accuracy,
  readability,
  overall_quality,
  negation_detection,  // share of records judged true
  composite,
  hallucination_no,
  hallucination_minor,
  hallucination_major,
  omission_no,
  omission_minor,
  omission_major,
};
inline constexpr size_t kFieldCount = 23;

std::string_view field_key(Field f);    // "rouge1", "hallucination_major", ...
std::string_view field_label(Field f);  // "ROUGE-1", "Major Hallucination", ...
std::optional<Field> parse_field_key(std::string_view key);
bool is_count(Field f);

struct SafetyCounts {
  std::array<size_t, 3> hallucination{};  // No, Minor, Major
  std::array<size_t, 3> omission{};

  bool operator==(const SafetyCounts&) const = default;
};

struct AggregateRow {
  std::string dataset;
  std::string model;
  size_t n = 0;
  std::array<std::optional<double>, kFieldCount> values{};  // indexed by Field
  std::optional<SafetyCounts> safety;

  std::optional<double> get(Field f) const { return values[static_cast<size_t>(f)]; }
  void set(Field f, std::optional<double> v) { values[static_cast<size_t>(f)] = v; }
};

struct AggregateResult {
  AggregateRow row;
  std::vector<std::string> orphan_ids;  // in one input but not the other
};

/// Means over present values (sums taken over sorted values, so row order
/// never changes a result) and severity counts over judged rows. Throws
/// UsageError when both inputs are empty and ValidationError when a row's
/// model differs from `model`.
AggregateResult aggregate(const std::vector<ScoreRow>& scores, const std::vector<judge::JudgedRecord>& judged,
                          std::string dataset, std::string model);

Json to_json(const AggregateRow& row);
AggregateRow aggregate_from_json(const Json& j, std::string_view loc);

/// (treatment - baseline) / baseline * 100; nullopt when baseline is 0.
std::optional<double> percent_change(double baseline, double treatment);

struct FieldDelta {
  Field field;
  double baseline = 0;
  double treatment = 0;
  double delta = 0;
  std::optional<double> percent;
};

struct ComparisonReport {
  std::string dataset;
  AggregateRow baseline;
  AggregateRow treatment;
  std::vector<FieldDelta> deltas;  // every field present on both sides, Field order

  const FieldDelta* find(Field f) const;
};

/// Throws ValidationError when the dataset labels differ.
ComparisonReport compare(const AggregateRow& baseline, const AggregateRow& treatment);

enum class TableFormat { markdown, csv, jsonl };

/// Renders every row sorted by (dataset, model). Markdown holds three
/// tables (text similarity, clinical quality, safety); csv and jsonl carry
/// one record per row with every column. Metrics print with 3 decimals,
/// Likert means with 2, counts as integers, and missing values as "n/a".
std::string render_tables(std::vector<AggregateRow> rows, TableFormat format);

std::string format_value(Field f, std::optional<double> v);
std::string format_percent(std::optional<double> pct);

std::string render_comparison_markdown(const ComparisonReport& report);
Json comparison_to_json(const ComparisonReport& report);

enum class ChartGroup { text_similarity, clinical_quality, hallucination, omission };
std::string_view to_string(ChartGroup g);
std::vector<Field> chart_fields(ChartGroup g);

/// Self-contained SVG grouped bar chart, baseline vs treatment per field.
/// Fields missing on both sides are skipped; ValidationError when none
/// remain.
std::string render_chart(const ComparisonReport& report, ChartGroup group);

}  // namespace scribebench::report
