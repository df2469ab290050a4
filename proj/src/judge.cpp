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

#include "scribebench/judge.hpp"

#include <cmath>
#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/concurrency.hpp"
#include "scribebench/util.hpp"

namespace scribebench::judge {
namespace {

constexpr std::string_view kCorrection =
    "Your previous reply could not be used: {}. Reply again with only the JSON object, using exactly the "
    "keys listed in the instructions.";

std::string document(std::string_view label, std::string_view body) {
  return fmt::format("{}:\n<<<\n{}\n>>>", label, body);
}

int parse_likert(const Json& obj, std::string_view field) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) throw JudgeParseError(std::string(field), fmt::format("missing field \"{}\"", field));
  double v = 0;
  if (it->is_number()) {
    v = it->get<double>();
  } else {
    throw JudgeParseError(std::string(field), fmt::format("field \"{}\" is not a number", field));
  }
  if (!std::isfinite(v) || v != std::floor(v)) {
    throw JudgeParseError(std::string(field), fmt::format("field \"{}\" is not an integer", field));
  }
  if (v < 1 || v > 5) {
    throw JudgeParseError(std::string(field), fmt::format("field \"{}\" = {} is outside 1..5", field, v));
  }
  return static_cast<int>(v);
}

Severity parse_severity_field(const Json& obj, std::string_view field) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) throw JudgeParseError(std::string(field), fmt::format("missing field \"{}\"", field));
  if (!it->is_string()) {
    throw JudgeParseError(std::string(field), fmt::format("field \"{}\" is not a string", field));
  }
  auto s = parse_severity(it->get<std::string>());
  if (!s) {
    throw JudgeParseError(std::string(field), fmt::format("field \"{}\" has unrecognized severity \"{}\"",
                                                          field, it->get<std::string>()));
  }
  return *s;
}

bool parse_bool_field(const Json& obj, std::string_view field) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) throw JudgeParseError(std::string(field), fmt::format("missing field \"{}\"", field));
  if (it->is_boolean()) return it->get<bool>();
  if (it->is_string()) {
    std::string v = to_lower_ascii(trim(it->get<std::string>()));
    if (v == "true" || v == "yes") return true;
    if (v == "false" || v == "no") return false;
  }
  throw JudgeParseError(std::string(field), fmt::format("field \"{}\" is not a boolean", field));
}

}  // namespace

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::no:
      return "No";
    case Severity::minor:
      return "Minor";
    case Severity::major:
      return "Major";
  }
  return "No";
}

std::optional<Severity> parse_severity(std::string_view text) {
  std::string v = to_lower_ascii(trim(text));
  if (v == "no") return Severity::no;
  if (v == "minor") return Severity::minor;
  if (v == "major") return Severity::major;
  return std::nullopt;
}

void JudgeAssessment::validate() const {
  for (size_t i = 0; i < kLikertCount; ++i) {
    if (likert[i] < 1 || likert[i] > 5) {
      throw ValidationError(fmt::format("field \"{}\" = {} is outside 1..5", kLikertFields[i], likert[i]));
    }
  }
}

double composite_score(const JudgeAssessment& a) {
  double sum = 0;
  for (int v : a.likert) sum += v;
  return sum / static_cast<double>(kLikertCount);
}

Json JudgeConfig::to_json() const {
  Json j;
  j["client"] = client.to_json();
  j["judge_model"] = judge_model;
  j["temperature"] = temperature;
  j["include_transcript"] = include_transcript;
  j["max_reasks"] = max_reasks;
  j["max_tokens"] = max_tokens;
  j["prompt_template_id"] = prompt_template_id;
  return j;
}

JudgeAssessment parse_judge_response(std::string_view text) {
  size_t open = text.find('{');
  size_t close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw JudgeParseError("", "reply does not contain a JSON object");
  }
  Json obj = Json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw JudgeParseError("", "reply is not a valid JSON object");

  JudgeAssessment a;
  for (size_t i = 0; i < kLikertCount; ++i) a.likert[i] = parse_likert(obj, kLikertFields[i]);
  a.negation_detection = parse_bool_field(obj, "negation_detection");
  a.hallucination = parse_severity_field(obj, "hallucination");
  a.omission = parse_severity_field(obj, "omission");
  if (auto it = obj.find("rationale"); it != obj.end()) {
    if (!it->is_string()) throw JudgeParseError("rationale", "field \"rationale\" is not a string");
    a.rationale = it->get<std::string>();
  }
  return a;
}

std::vector<llm::Message> build_judge_prompt(const std::optional<std::string>& transcript,
                                             const std::string& reference_note,
                                             const std::string& candidate_note, const PromptTemplate& tmpl) {
  if (trim(candidate_note).empty()) throw UsageError("judge prompt: candidate note is empty");
  if (trim(reference_note).empty()) throw UsageError("judge prompt: reference note is empty");
  std::string docs;
  std::string grounding;
  if (transcript) {
    docs = document("TRANSCRIPT", *transcript) + "\n\n";
    grounding = "the TRANSCRIPT";
  } else {
    grounding = "the REFERENCE NOTE";
  }
  docs += document("REFERENCE NOTE", reference_note) + "\n\n" + document("CANDIDATE NOTE", candidate_note);
  return tmpl.render({{"documents", docs}, {"grounding_source", grounding}});
}

Json to_json(const JudgedRecord& r) {
  Json j;
  j["id"] = r.id;
  j["model"] = r.model;
  for (size_t i = 0; i < kLikertCount; ++i) j[std::string(kLikertFields[i])] = r.assessment.likert[i];
  j["negation_detection"] = r.assessment.negation_detection;
  j["hallucination"] = to_string(r.assessment.hallucination);
  j["omission"] = to_string(r.assessment.omission);
  j["rationale"] = r.assessment.rationale;
  j["reask_count"] = r.reask_count;
  return j;
}

JudgedRecord judged_from_json(const Json& j, std::string_view loc) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: expected an object", loc));
  JudgedRecord r;
  r.id = jsonl::require_string(j, "id", loc);
  r.model = jsonl::require_string(j, "model", loc);
  try {
    r.assessment = parse_judge_response(jsonl::dump(j));
  } catch (const JudgeParseError& e) {
    throw ValidationError(fmt::format("{}: {}", loc, e.what()));
  }
  if (auto it = j.find("reask_count"); it != j.end() && it->is_number_integer()) r.reask_count = it->get<int>();
  return r;
}

std::vector<JudgedRecord> load_judged(const std::filesystem::path& path) {
  std::vector<JudgedRecord> out;
  std::map<std::string, size_t> seen;
  for (const auto& line : jsonl::read(path)) {
    std::string loc = fmt::format("{}:{}", path.string(), line.number);
    JudgedRecord r = judged_from_json(line.value, loc);
    auto [it, inserted] = seen.emplace(r.id, line.number);
    if (!inserted) {
      throw ValidationError(fmt::format("{}: duplicate id \"{}\" (lines {} and {})", path.string(), r.id,
                                        it->second, line.number));
    }
    out.push_back(std::move(r));
  }
  return out;
}

JudgedRecord judge_pair(const JudgeInput& input, const JudgeConfig& config, const PromptTemplate& tmpl,
                        llm::ChatClient& client) {
  llm::ChatRequest req;
  req.model = config.judge_model;
  req.temperature = config.temperature;
  req.max_tokens = config.max_tokens;
  req.force_structured_output = true;
  req.messages = build_judge_prompt(config.include_transcript ? input.transcript : std::nullopt,
                                    input.reference_note, input.candidate_note, tmpl);
  for (int attempt = 0;; ++attempt) {
    llm::ChatResponse resp = client.chat(req);
    try {
      return {input.id, input.model, parse_judge_response(resp.content), attempt};
    } catch (const JudgeParseError& e) {
      if (attempt >= config.max_reasks) {
        throw JudgeParseError(e.field(), fmt::format("judge reply unusable after {} re-ask(s): {}",
                                                     attempt, e.what()));
      }
      spdlog::warn("judge reply for {} unusable ({}); re-asking", input.id, e.what());
      req.messages.push_back({llm::Role::assistant, resp.content});
      req.messages.push_back({llm::Role::user, fmt::format(kCorrection, e.what())});
    }
  }
}

JudgeBatchOutcome judge_batch(const std::vector<JudgeInput>& inputs, const JudgeConfig& config,
                              const PromptTemplate& tmpl, llm::ChatClient& client) {
  std::vector<std::optional<JudgedRecord>> slots(inputs.size());
  JudgeBatchOutcome out;
  std::mutex mu;
  parallel_for(inputs.size(), client.config().max_concurrency, [&](size_t i) {
    try {
      slots[i] = judge_pair(inputs[i], config, tmpl, client);
    } catch (const std::exception& e) {
      spdlog::error("judging failed for {}: {}", inputs[i].id, e.what());
      std::lock_guard lock(mu);
      out.failures.emplace(inputs[i].id, e.what());
    }
  });
  for (auto& s : slots) {
    if (s) out.judged.push_back(std::move(*s));
  }
  return out;
}

std::vector<JudgeInput> join_inputs(const std::vector<data::ReferencePair>& references,
                                    const std::vector<data::CandidateRecord>& candidates,
                                    const std::vector<data::TranscriptRecord>& transcripts,
                                    bool include_transcript) {
  std::map<std::string, const data::ReferencePair*> refs;
  for (const auto& r : references) refs.emplace(r.id, &r);
  std::map<std::string, const data::TranscriptRecord*> trans;
  for (const auto& t : transcripts) trans.emplace(t.id, &t);

  std::vector<JudgeInput> out;
  std::vector<std::string> orphans;
  for (const auto& c : candidates) {
    auto it = refs.find(c.id);
    if (it == refs.end()) {
      orphans.push_back(c.id);
      continue;
    }
    JudgeInput in;
    in.id = c.id;
    in.model = c.model;
    in.reference_note = it->second->reference_note.raw;
    in.candidate_note = c.note.raw;
    if (include_transcript) {
      if (auto t = trans.find(c.id); t != trans.end()) {
        in.transcript = t->second->transcript;
      } else if (it->second->transcript) {
        in.transcript = it->second->transcript->transcript;
      } else {
        throw ValidationError(fmt::format("no transcript for id \"{}\" (pass transcripts or disable "
                                          "include_transcript)",
                                          c.id));
      }
    }
    out.push_back(std::move(in));
  }
  if (!orphans.empty()) {
    std::string list;
    for (const auto& id : orphans) list += (list.empty() ? "" : ", ") + id;
    throw ValidationError(fmt::format("candidates without a reference: {}", list));
  }
  return out;
}

}  // namespace scribebench::judge
