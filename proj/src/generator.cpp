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

#include "scribebench/generator.hpp"

#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/concurrency.hpp"
#include "scribebench/util.hpp"

namespace scribebench::gen {
namespace {

std::string heading_list(const note::SectionSchema& schema) {
  std::string out;
  for (const auto& h : schema.canonical()) {
    if (!out.empty()) out += '\n';
    out += "## " + h;
  }
  return out;
}

}  // namespace

Json GenerationProfile::to_json() const {
  Json j;
  j["profile_id"] = profile_id;
  j["client"] = client.to_json();
  j["model"] = model;
  j["prompt_template_id"] = prompt_template_id;
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

GenerationProfile GenerationProfile::from_json(std::string profile_id, const Json& j,
                                               const llm::ClientConfig& client_defaults) {
  if (!j.is_object()) throw ValidationError(fmt::format("profile \"{}\" must be an object", profile_id));
  GenerationProfile p;
  p.profile_id = std::move(profile_id);
  p.client = j.contains("client") ? llm::ClientConfig::from_json(j["client"], client_defaults) : client_defaults;
  try {
    p.model = j.at("model").get<std::string>();
    if (j.contains("prompt_template")) p.prompt_template_id = j["prompt_template"].get<std::string>();
    if (j.contains("temperature")) p.temperature = j["temperature"].get<double>();
    if (j.contains("max_tokens")) p.max_tokens = j["max_tokens"].get<int>();
    if (j.contains("seed") && !j["seed"].is_null()) p.seed = j["seed"].get<int64_t>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("profile \"{}\": {}", p.profile_id, e.what()));
  }
  return p;
}

std::string GenerationProfile::config_hash() const { return sha256_hex(jsonl::dump(to_json())); }

std::vector<llm::Message> render_prompt(const PromptTemplate& tmpl, const data::TranscriptRecord& transcript,
                                        const note::SectionSchema& schema) {
  tmpl.require_once_in_user(kTranscriptPlaceholder);
  return tmpl.render({{"transcript", transcript.transcript}, {"section_headings", heading_list(schema)}});
}

data::CandidateRecord generate_note(const data::TranscriptRecord& transcript, const GenerationProfile& profile,
                                    const PromptTemplate& tmpl, llm::ChatClient& client,
                                    const note::SectionSchema& schema) {
  llm::ChatRequest req;
  req.model = profile.model;
  req.messages = render_prompt(tmpl, transcript, schema);
  req.temperature = profile.temperature;
  req.max_tokens = profile.max_tokens;
  req.seed = profile.seed;
  llm::ChatResponse resp = client.chat(req);

  data::CandidateRecord c;
  c.id = transcript.id;
  c.model = profile.profile_id;
  c.gen_config_hash = profile.config_hash();
  c.note = note::parse_note(resp.content, schema);
  if (!c.note.has_recognized_section()) c.warnings.emplace_back(kWarnNoRecognizedSections);
  if (resp.finish_reason == llm::FinishReason::length) c.warnings.emplace_back(kWarnTruncated);
  return c;
}

BatchOutcome generate_batch(const std::vector<data::TranscriptRecord>& dataset, const GenerationProfile& profile,
                            const PromptTemplate& tmpl, llm::ChatClient& client,
                            const note::SectionSchema& schema) {
  tmpl.require_once_in_user(kTranscriptPlaceholder);
  std::vector<std::optional<data::CandidateRecord>> slots(dataset.size());
  std::mutex mu;
  BatchOutcome out;
  parallel_for(dataset.size(), client.config().max_concurrency, [&](size_t i) {
    try {
      slots[i] = generate_note(dataset[i], profile, tmpl, client, schema);
    } catch (const std::exception& e) {
      spdlog::error("generation failed for {}: {}", dataset[i].id, e.what());
      std::lock_guard lock(mu);
      out.failures.emplace(dataset[i].id, e.what());
    }
  });
  for (auto& slot : slots) {
    if (slot) out.candidates.push_back(std::move(*slot));
  }
  return out;
}

BatchOutcome generate_batch_to_file(const std::vector<data::TranscriptRecord>& dataset,
                                    const GenerationProfile& profile, const PromptTemplate& tmpl,
                                    llm::ChatClient& client, const note::SectionSchema& schema,
                                    const std::filesystem::path& out) {
  BatchOutcome outcome = generate_batch(dataset, profile, tmpl, client, schema);
  write_file_atomic(out, data::serialize_records(outcome.candidates));
  return outcome;
}

}  // namespace scribebench::gen
