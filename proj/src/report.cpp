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

#include "scribebench/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "scribebench/errors.hpp"

namespace scribebench::report {
namespace {

struct FieldInfo {
  std::string_view key;
  std::string_view label;
};

constexpr std::array<FieldInfo, kFieldCount> kFields = {{
    {"rouge1", "ROUGE-1"},
    {"rouge2", "ROUGE-2"},
    {"rougeL", "ROUGE-L"},
    {"rougeLsum", "ROUGE-Lsum"},
    {"bertscore_p", "BERTScore P"},
    {"bertscore_r", "BERTScore R"},
    {"bertscore_f1", "BERTScore F1"},
    {"bleurt", "BLEURT"},
    {"factual_correctness", "Factual Correctness"},
    {"completeness", "Completeness"},
    {"clinical_relevance", "Clinical Relevance"},
    {"coherence_organization", "Coherence and Organization"},
    {"terminology_accuracy", "Terminology Accuracy"},
    {"readability", "Readability"},
    {"overall_quality", "Overall Quality"},
    {"negation_detection", "Negation Detection"},
    {"composite", "Composite Score"},
    {"hallucination_no", "No Hallucination"},
    {"hallucination_minor", "Minor Hallucination"},
    {"hallucination_major", "Major Hallucination"},
    {"omission_no", "No Omission"},
    {"omission_minor", "Minor Omission"},
    {"omission_major", "Major Omission"},
}};

constexpr std::string_view kMissing = "n/a";

const std::vector<Field> kTable1 = {Field::rouge1,    Field::rouge2,       Field::rougeL,
                                    Field::rougeLsum, Field::bertscore_f1, Field::bleurt};
const std::vector<Field> kTable2 = {Field::factual_correctness,  Field::completeness,
                                    Field::clinical_relevance,   Field::coherence_organization,
                                    Field::terminology_accuracy, Field::readability,
                                    Field::overall_quality,      Field::negation_detection,
                                    Field::composite};
const std::vector<Field> kTable3 = {Field::hallucination_no, Field::hallucination_minor, Field::hallucination_major,
                                    Field::omission_no,      Field::omission_minor,      Field::omission_major};

Field field_at(size_t i) { return static_cast<Field>(i); }

bool is_likert_scale(Field f) {
  return f >= Field::factual_correctness && f <= Field::composite;
}

// Mean of `values` summed in sorted order.
std::optional<double> mean(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_table(const std::vector<AggregateRow>& rows, const std::vector<Field>& fields) {
  std::string out = "| Dataset | Model |";
  std::string rule = "|---|---|";
  for (Field f : fields) {
    out += fmt::format(" {} |", field_label(f));
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (const auto& r : rows) {
    out += fmt::format("| {} | {} |", md_cell(r.dataset), md_cell(r.model));
    for (Field f : fields) out += fmt::format(" {} |", format_value(f, r.get(f)));
    out += "\n";
  }
  return out;
}

std::string signed_value(Field f, double v) {
  std::string s = format_value(f, v);
  return v > 0 ? "+" + s : s;
}

}  // namespace

std::string_view field_key(Field f) { return kFields[static_cast<size_t>(f)].key; }
std::string_view field_label(Field f) { return kFields[static_cast<size_t>(f)].label; }

std::optional<Field> parse_field_key(std::string_view key) {
  for (size_t i = 0; i < kFieldCount; ++i) {
    if (kFields[i].key == key) return field_at(i);
  }
  return std::nullopt;
}

bool is_count(Field f) { return f >= Field::hallucination_no; }

AggregateResult aggregate(const std::vector<ScoreRow>& scores, const std::vector<judge::JudgedRecord>& judged,
                          std::string dataset, std::string model) {
  if (scores.empty() && judged.empty()) throw UsageError("aggregate: no score or judged rows");
  std::map<Field, std::vector<double>> collected;
  std::set<std::string> score_ids;
  std::set<std::string> judged_ids;

  for (const auto& s : scores) {
    if (s.model != model) {
      throw ValidationError(fmt::format("scores row \"{}\" has model \"{}\", expected \"{}\"", s.id, s.model, model));
    }
    if (!score_ids.insert(s.id).second) throw ValidationError(fmt::format("duplicate scores id \"{}\"", s.id));
    if (s.rouge) {
      collected[Field::rouge1].push_back(s.rouge->rouge1.fmeasure);
      collected[Field::rouge2].push_back(s.rouge->rouge2.fmeasure);
      collected[Field::rougeL].push_back(s.rouge->rougeL.fmeasure);
      collected[Field::rougeLsum].push_back(s.rouge->rougeLsum.fmeasure);
    }
    if (s.bertscore) {
      collected[Field::bertscore_p].push_back(s.bertscore->precision);
      collected[Field::bertscore_r].push_back(s.bertscore->recall);
      collected[Field::bertscore_f1].push_back(s.bertscore->f1);
    }
    if (s.bleurt) collected[Field::bleurt].push_back(*s.bleurt);
  }

  std::optional<SafetyCounts> safety;
  if (!judged.empty()) safety.emplace();
  for (const auto& j : judged) {
    if (j.model != model) {
      throw ValidationError(fmt::format("judged row \"{}\" has model \"{}\", expected \"{}\"", j.id, j.model, model));
    }
    if (!judged_ids.insert(j.id).second) throw ValidationError(fmt::format("duplicate judged id \"{}\"", j.id));
    const auto& a = j.assessment;
    for (size_t d = 0; d < judge::kLikertCount; ++d) {
      collected[field_at(static_cast<size_t>(Field::factual_correctness) + d)].push_back(a.likert[d]);
    }
    collected[Field::negation_detection].push_back(a.negation_detection ? 1.0 : 0.0);
    collected[Field::composite].push_back(judge::composite_score(a));
    ++safety->hallucination[static_cast<size_t>(a.hallucination)];
    ++safety->omission[static_cast<size_t>(a.omission)];
  }

  AggregateResult out;
  AggregateRow& row = out.row;
  row.dataset = std::move(dataset);
  row.model = std::move(model);
  std::set<std::string> all = score_ids;
  all.insert(judged_ids.begin(), judged_ids.end());
  row.n = all.size();
  for (auto& [field, values] : collected) row.set(field, mean(std::move(values)));
  if (safety) {
    row.safety = safety;
    for (size_t k = 0; k < 3; ++k) {
      row.set(field_at(static_cast<size_t>(Field::hallucination_no) + k), double(safety->hallucination[k]));
      row.set(field_at(static_cast<size_t>(Field::omission_no) + k), double(safety->omission[k]));
    }
  }
  if (!scores.empty() && !judged.empty()) {
    std::set_symmetric_difference(score_ids.begin(), score_ids.end(), judged_ids.begin(), judged_ids.end(),
                                  std::back_inserter(out.orphan_ids));
  }
  return out;
}

Json to_json(const AggregateRow& row) {
  Json j;
  j["dataset"] = row.dataset;
  j["model"] = row.model;
  j["n"] = row.n;
  Json values;
  for (size_t i = 0; i < kFieldCount; ++i) {
    values[std::string(kFields[i].key)] = row.values[i] ? Json(*row.values[i]) : Json(nullptr);
  }
  j["values"] = std::move(values);
  if (row.safety) {
    j["safety"] = {{"hallucination", row.safety->hallucination}, {"omission", row.safety->omission}};
  } else {
    j["safety"] = nullptr;
  }
  return j;
}

AggregateRow aggregate_from_json(const Json& j, std::string_view loc) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: aggregate must be an object", loc));
  AggregateRow row;
  try {
    row.dataset = j.at("dataset").get<std::string>();
    row.model = j.at("model").get<std::string>();
    row.n = j.at("n").get<size_t>();
    for (const auto& [key, value] : j.at("values").items()) {
      auto f = parse_field_key(key);
      if (!f) throw ValidationError(fmt::format("{}: unknown field \"{}\"", loc, key));
      if (!value.is_null()) row.set(*f, value.get<double>());
    }
    if (j.contains("safety") && !j["safety"].is_null()) {
      SafetyCounts s;
      s.hallucination = j["safety"].at("hallucination").get<std::array<size_t, 3>>();
      s.omission = j["safety"].at("omission").get<std::array<size_t, 3>>();
      row.safety = s;
    }
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", loc, e.what()));
  }
  return row;
}

std::optional<double> percent_change(double baseline, double treatment) {
  if (baseline == 0.0) return std::nullopt;
  return (treatment - baseline) / baseline * 100.0;
}

const FieldDelta* ComparisonReport::find(Field f) const {
  for (const auto& d : deltas) {
    if (d.field == f) return &d;
  }
  return nullptr;
}

ComparisonReport compare(const AggregateRow& baseline, const AggregateRow& treatment) {
  if (baseline.dataset != treatment.dataset) {
    throw ValidationError(fmt::format("cannot compare dataset \"{}\" with \"{}\"", baseline.dataset,
                                      treatment.dataset));
  }
  ComparisonReport r;
  r.dataset = baseline.dataset;
  r.baseline = baseline;
  r.treatment = treatment;
  for (size_t i = 0; i < kFieldCount; ++i) {
    if (!baseline.values[i] || !treatment.values[i]) continue;
    double b = *baseline.values[i];
    double t = *treatment.values[i];
    r.deltas.push_back({field_at(i), b, t, t - b, percent_change(b, t)});
  }
  return r;
}

std::string format_value(Field f, std::optional<double> v) {
  if (!v) return std::string(kMissing);
  if (is_count(f)) return fmt::format("{}", static_cast<long long>(std::llround(*v)));
  if (is_likert_scale(f)) return fmt::format("{:.2f}", *v);
  return fmt::format("{:.3f}", *v);
}

std::string format_percent(std::optional<double> pct) {
  if (!pct) return "n/a";
  double rounded = std::round(*pct * 10.0) / 10.0;
  if (rounded == 0.0) return "0.0%";
  return fmt::format("{:+.1f}%", rounded);
}

std::string render_tables(std::vector<AggregateRow> rows, TableFormat format) {
  std::stable_sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return std::tie(a.dataset, a.model) < std::tie(b.dataset, b.model);
  });
  std::string out;
  switch (format) {
    case TableFormat::markdown:
      out += "## Automated evaluation\n\n" + md_table(rows, kTable1);
      out += "\n## Clinical quality assessment\n\n" + md_table(rows, kTable2);
      out += "\n## Clinical safety\n\n" + md_table(rows, kTable3);
      break;
    case TableFormat::csv:
      out += "Dataset,Model,n";
      for (size_t i = 0; i < kFieldCount; ++i) out += fmt::format(",{}", csv_cell(kFields[i].label));
      out += "\n";
      for (const auto& r : rows) {
        out += fmt::format("{},{},{}", csv_cell(r.dataset), csv_cell(r.model), r.n);
        for (size_t i = 0; i < kFieldCount; ++i) out += "," + format_value(field_at(i), r.values[i]);
        out += "\n";
      }
      break;
    case TableFormat::jsonl:
      for (const auto& r : rows) {
        Json j;
        j["dataset"] = r.dataset;
        j["model"] = r.model;
        j["n"] = r.n;
        for (size_t i = 0; i < kFieldCount; ++i) {
          // Same rounding as the text formats.
          j[std::string(kFields[i].key)] =
              r.values[i] ? Json(std::stod(format_value(field_at(i), r.values[i]))) : Json(nullptr);
        }
        out += jsonl::dump(j) + "\n";
      }
      break;
  }
  return out;
}

std::string render_comparison_markdown(const ComparisonReport& r) {
  std::string out = fmt::format("# {}: {} vs {}\n\n", r.dataset, r.baseline.model, r.treatment.model);
  out += fmt::format("| Metric | {} | {} | Delta | Change |\n|---|---:|---:|---:|---:|\n", md_cell(r.baseline.model),
                     md_cell(r.treatment.model));
  for (const auto& d : r.deltas) {
    out += fmt::format("| {} | {} | {} | {} | {} |\n", field_label(d.field), format_value(d.field, d.baseline),
                       format_value(d.field, d.treatment), signed_value(d.field, d.delta), format_percent(d.percent));
  }
  out += fmt::format("\nn: {} (baseline), {} (treatment)\n", r.baseline.n, r.treatment.n);
  return out;
}

Json comparison_to_json(const ComparisonReport& r) {
  Json j;
  j["dataset"] = r.dataset;
  j["baseline"] = to_json(r.baseline);
  j["treatment"] = to_json(r.treatment);
  Json deltas = Json::array();
  for (const auto& d : r.deltas) {
    deltas.push_back({{"field", field_key(d.field)},
                      {"baseline", d.baseline},
                      {"treatment", d.treatment},
                      {"delta", d.delta},
                      {"percent_change", d.percent ? Json(*d.percent) : Json(nullptr)}});
  }
  j["deltas"] = std::move(deltas);
  return j;
}

}  // namespace scribebench::report
