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

#include "scribebench/scores.hpp"

#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/concurrency.hpp"
#include "scribebench/errors.hpp"
#include "scribebench/util.hpp"

namespace scribebench::report {
namespace {

Json rouge_json(const rouge::RougeScore& s) {
  return {{"p", s.precision}, {"r", s.recall}, {"f", s.fmeasure}};
}

rouge::RougeScore rouge_from(const Json& j, std::string_view loc) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: rouge entry must be an object", loc));
  return {jsonl::require_number(j, "p", loc), jsonl::require_number(j, "r", loc), jsonl::require_number(j, "f", loc)};
}

}  // namespace

Json to_json(const ScoreRow& row) {
  Json j;
  j["id"] = row.id;
  j["model"] = row.model;
  if (row.rouge) {
    j["rouge1"] = rouge_json(row.rouge->rouge1);
    j["rouge2"] = rouge_json(row.rouge->rouge2);
    j["rougeL"] = rouge_json(row.rouge->rougeL);
    j["rougeLsum"] = rouge_json(row.rouge->rougeLsum);
  } else {
    j["rouge1"] = j["rouge2"] = j["rougeL"] = j["rougeLsum"] = nullptr;
  }
  if (row.bertscore) {
    j["bertscore"] = {{"p", row.bertscore->precision}, {"r", row.bertscore->recall}, {"f1", row.bertscore->f1}};
  } else {
    j["bertscore"] = nullptr;
  }
  j["bleurt"] = row.bleurt ? Json(*row.bleurt) : Json(nullptr);
  return j;
}

ScoreRow score_from_json(const Json& j, std::string_view loc) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: expected an object", loc));
  ScoreRow row;
  row.id = jsonl::require_string(j, "id", loc);
  row.model = jsonl::require_string(j, "model", loc);
  auto present = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };
  if (present("rouge1")) {
    for (const char* key : {"rouge2", "rougeL", "rougeLsum"}) {
      if (!present(key)) throw ValidationError(fmt::format("{}: rouge1 present but {} missing", loc, key));
    }
    row.rouge = rouge::RougeSuite{rouge_from(j["rouge1"], loc), rouge_from(j["rouge2"], loc),
                                  rouge_from(j["rougeL"], loc), rouge_from(j["rougeLsum"], loc)};
  }
  if (present("bertscore")) {
    const Json& b = j["bertscore"];
    row.bertscore = embed::BertScoreResult{jsonl::require_number(b, "p", loc), jsonl::require_number(b, "r", loc),
                                           jsonl::require_number(b, "f1", loc)};
  }
  if (present("bleurt")) row.bleurt = jsonl::require_number(j, "bleurt", loc);
  return row;
}

std::vector<ScoreRow> load_scores(const std::filesystem::path& path) {
  std::vector<ScoreRow> rows;
  std::map<std::string, size_t> seen;
  for (const auto& line : jsonl::read(path)) {
    std::string loc = fmt::format("{}:{}", path.string(), line.number);
    ScoreRow row = score_from_json(line.value, loc);
    auto [it, inserted] = seen.emplace(row.id, line.number);
    if (!inserted) {
      throw ValidationError(fmt::format("{}: duplicate id \"{}\" (lines {} and {})", path.string(), row.id,
                                        it->second, line.number));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::set<Metric> parse_metrics(std::string_view list) {
  std::set<Metric> out;
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    std::string name = to_lower_ascii(trim(list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos)));
    if (name == "rouge") {
      out.insert(Metric::rouge);
    } else if (name == "bertscore") {
      out.insert(Metric::bertscore);
    } else {
      throw UsageError(fmt::format("unknown metric \"{}\" (known: rouge, bertscore)", name));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

EvaluateOutcome evaluate_pairs(const std::vector<data::ReferencePair>& references,
                               const std::vector<data::CandidateRecord>& candidates, const EvaluateOptions& options) {
  bool want_bert = options.metrics.contains(Metric::bertscore);
  if (want_bert && !options.backend) throw UsageError("bertscore requested without an embedding backend");

  std::map<std::string, const data::ReferencePair*> refs;
  for (const auto& r : references) refs.emplace(r.id, &r);
  std::vector<std::string> orphans;
  for (const auto& c : candidates) {
    if (!refs.contains(c.id)) orphans.push_back(c.id);
  }
  if (!orphans.empty()) {
    std::string list;
    for (const auto& id : orphans) list += (list.empty() ? "" : ", ") + id;
    throw ValidationError(fmt::format("candidates without a reference: {}", list));
  }

  EvaluateOutcome out;
  out.rows.resize(candidates.size());
  parallel_for(candidates.size(), options.workers, [&](size_t i) {
    const auto& c = candidates[i];
    const std::string& ref = refs.at(c.id)->reference_note.raw;
    ScoreRow& row = out.rows[i];
    row.id = c.id;
    row.model = c.model;
    if (options.metrics.contains(Metric::rouge)) row.rouge = rouge::rouge_suite(c.note.raw, ref, options.rouge_config);
    if (want_bert) row.bertscore = embed::bertscore(c.note.raw, ref, *options.backend, options.idf);
  });

  if (options.external) {
    size_t missing = 0;
    for (auto& row : out.rows) {
      auto it = options.external->by_id.find(row.id);
      if (it == options.external->by_id.end()) {
        ++missing;
      } else {
        row.bleurt = it->second;
      }
    }
    if (missing > 0) {
      out.warnings.push_back(fmt::format("{} candidate(s) have no {} score", missing, options.external->metric));
      spdlog::warn("{}", out.warnings.back());
    }
    out.warnings.insert(out.warnings.end(), options.external->warnings.begin(), options.external->warnings.end());
  }
  return out;
}

}  // namespace scribebench::report
