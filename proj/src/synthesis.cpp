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

#include "scribebench/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/concurrency.hpp"
#include "scribebench/util.hpp"

namespace scribebench::synth {
namespace fs = std::filesystem;
namespace {

constexpr size_t kMaxExclusions = 200;
constexpr int kMaxTopicRerequests = 3;
constexpr std::string_view kTopicsFile = "topics.json";
constexpr std::string_view kManifestFile = "run_manifest.json";

llm::ChatRequest make_request(const StageProfile& p, std::vector<llm::Message> messages, bool structured) {
  llm::ChatRequest req;
  req.model = p.model;
  req.messages = std::move(messages);
  req.temperature = p.temperature;
  req.max_tokens = p.max_tokens;
  req.seed = p.seed;
  req.force_structured_output = structured;
  return req;
}

void add_correction(llm::ChatRequest& req, const std::string& previous, const std::string& problem) {
  req.messages.push_back({llm::Role::assistant, previous});
  req.messages.push_back({llm::Role::user, problem});
}

std::string heading_list(const note::SectionSchema& schema) {
  std::string out;
  for (const auto& h : schema.canonical()) out += (out.empty() ? "## " : "\n## ") + h;
  return out;
}

Json parse_embedded_object(std::string_view text) {
  size_t open = text.find('{');
  size_t close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ValidationError("reply does not contain a JSON object");
  }
  Json j = Json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("reply is not a valid JSON object");
  return j;
}

int score_field(const Json& obj, std::string_view field) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) throw ValidationError(fmt::format("missing field \"{}\"", field));
  if (!it->is_number()) throw ValidationError(fmt::format("field \"{}\" is not a number", field));
  double v = it->get<double>();
  if (v != std::floor(v) || v < 1 || v > 5) {
    throw ValidationError(fmt::format("field \"{}\" = {} is not an integer in 1..5", field, v));
  }
  return static_cast<int>(v);
}

std::string title_key(std::string_view title) { return to_lower_ascii(trim(title)); }

Json topics_to_json(const std::vector<Topic>& topics, int requests) {
  Json arr = Json::array();
  for (const auto& t : topics) arr.push_back({{"topic_id", t.topic_id}, {"title", t.title}, {"focus", t.focus}});
  return {{"requests", requests}, {"topics", std::move(arr)}};
}

// Appends distinct topics to `topics` until it holds `n`. `requests` counts
// topic requests made so far and numbers each batch.
void extend_topics(std::vector<Topic>& topics, int& requests, size_t n, const SynthesisConfig& config,
                   const StagePrompts& prompts, llm::ChatClient& client) {
  std::set<std::string> seen;
  for (const auto& t : topics) seen.insert(title_key(t.title));
  int short_streak = 0;
  while (topics.size() < n) {
    size_t want = std::min(config.topics_per_request, n - topics.size());
    std::string exclusions;
    size_t first = topics.size() > kMaxExclusions ? topics.size() - kMaxExclusions : 0;
    for (size_t i = first; i < topics.size(); ++i) {
      exclusions += (exclusions.empty() ? "Do not repeat any of these existing topics:\n- " : "\n- ");
      exclusions += topics[i].title;
    }
    ++requests;
    auto messages = prompts.topics.render({{"specialty", config.specialty},
                                           {"count", std::to_string(want)},
                                           {"batch", std::to_string(requests)},
                                           {"exclusions", exclusions}});
    llm::ChatResponse resp = client.chat(make_request(config.writer, std::move(messages), true));
    std::vector<std::pair<std::string, std::string>> parsed;
    try {
      parsed = parse_topics_response(resp.content);
    } catch (const ValidationError& e) {
      spdlog::warn("topic batch {} unusable: {}", requests, e.what());
    }
    size_t added = 0;
    for (auto& [title, focus] : parsed) {
      if (added == want) break;
      if (!seen.insert(title_key(title)).second) continue;
      topics.push_back({fmt::format("topic-{:05}", topics.size() + 1), title, focus});
      ++added;
    }
    if (added < want) {
      if (++short_streak > kMaxTopicRerequests) {
        throw RuntimeFailure(fmt::format("topic generation stalled: {} of {} distinct topics after {} re-requests",
                                         topics.size(), n, kMaxTopicRerequests));
      }
      spdlog::warn("topic batch {} gave {} of {} new topics; re-requesting", requests, added, want);
    } else {
      short_streak = 0;
    }
  }
}

class RecordCheckpoint {
 public:
  explicit RecordCheckpoint(fs::path dir) : dir_(std::move(dir)) {}

  template <typename Fn>
  std::string stage(const std::string& name, Fn&& produce) {
    fs::path path = dir_ / (name + ".out");
    if (fs::exists(path)) return read_file(path);
    std::string text = produce();
    write_file_atomic(path, text);
    return text;
  }

 private:
  fs::path dir_;
};

Json manifest_json(const SynthesisConfig& config, const StagePrompts& prompts, const note::SectionSchema& schema) {
  Json content = config.content_json();
  Json j;
  j["format_version"] = SCRIBEBENCH_FORMAT_VERSION;
  j["config"] = content;
  j["prompts"] = prompts.digests();
  j["schema_hash"] = sha256_hex(jsonl::dump(schema.to_json()));
  j["config_hash"] = sha256_hex(jsonl::dump(j["config"]) + jsonl::dump(j["prompts"]) + j["schema_hash"].get<std::string>());
  return j;
}

void check_or_write_manifest(const SynthesisConfig& config, const StagePrompts& prompts,
                             const note::SectionSchema& schema) {
  fs::create_directories(config.checkpoint_dir);
  Json mine = manifest_json(config, prompts, schema);
  fs::path path = config.checkpoint_dir / kManifestFile;
  if (fs::exists(path)) {
    Json theirs = Json::parse(read_file(path), nullptr, false);
    if (theirs.is_discarded() || !theirs.is_object() || theirs.value("config_hash", "") != mine["config_hash"]) {
      throw ValidationError(fmt::format("{} was written by a different synthesis configuration; use a fresh "
                                        "checkpoint directory",
                                        config.checkpoint_dir.string()));
    }
    return;
  }
  write_file_atomic(path, mine.dump(2) + "\n");
}

std::vector<Topic> load_or_make_topics(const SynthesisConfig& config, const StagePrompts& prompts,
                                       llm::ChatClient& client) {
  fs::path path = config.checkpoint_dir / kTopicsFile;
  std::vector<Topic> topics;
  int requests = 0;
  if (fs::exists(path)) {
    Json j = Json::parse(read_file(path));
    requests = j.at("requests").get<int>();
    for (const auto& t : j.at("topics")) {
      topics.push_back({t.at("topic_id").get<std::string>(), t.at("title").get<std::string>(),
                        t.at("focus").get<std::string>()});
    }
  }
  if (topics.size() < config.count) {
    extend_topics(topics, requests, config.count, config, prompts, client);
    write_file_atomic(path, topics_to_json(topics, requests).dump(2) + "\n");
  }
  return topics;
}

SynthRecord run_record(size_t index, const Topic& topic, const SynthesisConfig& config, const StagePrompts& prompts,
                       const note::SectionSchema& schema, llm::ChatClient& client) {
  RecordCheckpoint cp(config.checkpoint_dir / std::to_string(index));
  cp.stage("topic", [&] { return jsonl::dump(Json{{"topic_id", topic.topic_id}, {"title", topic.title},
                                                   {"focus", topic.focus}}); });
  std::string context = cp.stage("context", [&] { return expand_context(topic, config, prompts, client).description; });
  std::string transcript =
      cp.stage("transcript_0", [&] { return synthesize_transcript({topic.topic_id, context}, config, prompts, client); });

  SynthRecord rec;
  rec.id = fmt::format("{}-{:05}", config.specialty, index + 1);
  for (int k = 0;; ++k) {
    std::string stored = cp.stage(fmt::format("critique_{}", k), [&] {
      return jsonl::dump(critique_transcript(transcript, config, prompts, client).to_json());
    });
    CritiqueResult critique = parse_critique(stored, config.pass_threshold);
    if (critique.passed) {
      rec.critique_passed = true;
      break;
    }
    if (k == config.max_revision_iters) {
      rec.warnings.emplace_back("revision_budget_exhausted");
      break;
    }
    transcript = cp.stage(fmt::format("transcript_{}", k + 1), [&] {
      return revise_transcript(transcript, critique, config, prompts, client);
    });
    rec.revisions = k + 1;
  }
  rec.transcript = transcript;

  std::string stored_note = cp.stage("note", [&] {
    NoteTransform t = transform_to_note(transcript, config, prompts, schema, client);
    return t.text;
  });
  rec.note = stored_note;
  if (!note::parse_note(stored_note, schema).has_recognized_section()) {
    rec.warnings.emplace_back("no_recognized_sections");
  }
  return rec;
}

}  // namespace

Json CritiqueResult::to_json() const {
  return {{"completeness", completeness},
          {"clinical_relevance", clinical_relevance},
          {"realism", realism},
          {"feedback", feedback}};
}

Json StageProfile::to_json() const {
  Json j;
  j["model"] = model;
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

StageProfile StageProfile::from_json(const Json& j, StageProfile p) {
  if (!j.is_object()) throw ValidationError("stage profile must be an object");
  try {
    if (j.contains("model")) p.model = j["model"].get<std::string>();
    if (j.contains("temperature")) p.temperature = j["temperature"].get<double>();
    if (j.contains("max_tokens")) p.max_tokens = j["max_tokens"].get<int>();
    if (j.contains("seed")) p.seed = j["seed"].is_null() ? std::nullopt : std::optional(j["seed"].get<int64_t>());
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("stage profile: {}", e.what()));
  }
  return p;
}

StagePrompts StagePrompts::resolve(const std::optional<fs::path>& dir) {
  StagePrompts p;
  p.topics = PromptTemplate::resolve("synth_topics", dir);
  p.context = PromptTemplate::resolve("synth_context", dir);
  p.transcript = PromptTemplate::resolve("synth_transcript", dir);
  p.critique = PromptTemplate::resolve("synth_critique", dir);
  p.revise = PromptTemplate::resolve("synth_revise", dir);
  p.note = PromptTemplate::resolve("synth_note", dir);
  return p;
}

Json StagePrompts::digests() const {
  Json j;
  for (const PromptTemplate* t : {&topics, &context, &transcript, &critique, &revise, &note}) {
    j[t->id()] = t->digest();
  }
  return j;
}

void SynthesisConfig::validate() const {
  if (count < 1) throw UsageError("synthesis count must be at least 1");
  if (max_revision_iters < 0) throw UsageError("max_revision_iters must be >= 0");
  if (pass_threshold < 1 || pass_threshold > 5) throw UsageError("pass_threshold must be in 1..5");
  if (topics_per_request < 1) throw UsageError("topics_per_request must be at least 1");
  if (writer.model.empty() || critic.model.empty() || formatter.model.empty()) {
    throw UsageError("synthesis needs a model for the writer, critic and formatter stages");
  }
  if (checkpoint_dir.empty()) throw UsageError("synthesis needs a checkpoint directory");
  if (pilot && *pilot < 1) throw UsageError("--pilot must be at least 1");
}

Json SynthesisConfig::content_json() const {
  Json j;
  j["specialty"] = specialty;
  j["max_revision_iters"] = max_revision_iters;
  j["pass_threshold"] = pass_threshold;
  j["topics_per_request"] = topics_per_request;
  j["writer"] = writer.to_json();
  j["critic"] = critic.to_json();
  j["formatter"] = formatter.to_json();
  return j;
}

std::vector<std::string> speaker_labels(std::string_view text) {
  static const std::regex label(R"(^\s*([A-Za-z][A-Za-z .'-]{0,39}?)\s*:)");
  std::vector<std::string> out;
  for (const auto& line : split_lines(text)) {
    std::smatch m;
    std::string s(line);
    if (!std::regex_search(s, m, label)) continue;
    std::string name = m[1].str();
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

bool looks_like_dialogue(std::string_view text) { return speaker_labels(text).size() >= 2; }

std::vector<std::pair<std::string, std::string>> parse_topics_response(std::string_view text) {
  Json j;
  size_t open = text.find_first_of("{[");
  size_t close = text.find_last_of("}]");
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ValidationError("topic reply does not contain JSON");
  }
  j = Json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (j.is_discarded()) throw ValidationError("topic reply is not valid JSON");
  const Json* list = &j;
  if (j.is_object()) {
    auto it = j.find("topics");
    if (it == j.end() || !it->is_array()) throw ValidationError("topic reply lacks a \"topics\" array");
    list = &*it;
  }
  if (!list->is_array()) throw ValidationError("topic reply lacks a \"topics\" array");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : *list) {
    if (!t.is_object() || !t.contains("title") || !t["title"].is_string()) continue;
    std::string title(trim(t["title"].get<std::string>()));
    if (title.empty()) continue;
    std::string focus = t.contains("focus") && t["focus"].is_string() ? t["focus"].get<std::string>() : "";
    out.emplace_back(std::move(title), std::move(focus));
  }
  return out;
}

CritiqueResult parse_critique(std::string_view text, int pass_threshold) {
  Json j = parse_embedded_object(text);
  CritiqueResult c;
  c.completeness = score_field(j, "completeness");
  c.clinical_relevance = score_field(j, "clinical_relevance");
  c.realism = score_field(j, "realism");
  if (auto it = j.find("feedback"); it != j.end()) {
    if (!it->is_string()) throw ValidationError("field \"feedback\" is not a string");
    c.feedback = it->get<std::string>();
  }
  c.passed = c.completeness >= pass_threshold && c.clinical_relevance >= pass_threshold &&
             c.realism >= pass_threshold;
  return c;
}

std::vector<Topic> generate_topics(size_t n, const SynthesisConfig& config, const StagePrompts& prompts,
                                   llm::ChatClient& client) {
  if (n < 1) throw UsageError("generate_topics: n must be at least 1");
  std::vector<Topic> topics;
  int requests = 0;
  extend_topics(topics, requests, n, config, prompts, client);
  return topics;
}

CaseContext expand_context(const Topic& topic, const SynthesisConfig& config, const StagePrompts& prompts,
                           llm::ChatClient& client) {
  auto messages = prompts.context.render(
      {{"specialty", config.specialty}, {"title", topic.title}, {"focus", topic.focus}});
  llm::ChatResponse resp = client.chat(make_request(config.writer, std::move(messages), false));
  std::string description(trim(resp.content));
  if (description.empty()) throw RuntimeFailure(fmt::format("empty context for {}", topic.topic_id));
  return {topic.topic_id, description};
}

namespace {

std::string request_dialogue(llm::ChatRequest req, llm::ChatClient& client, std::string_view what) {
  std::string text;
  for (int attempt = 0; attempt < 2; ++attempt) {
    text = std::string(trim(client.chat(req).content));
    if (!text.empty() && looks_like_dialogue(text)) return text;
    if (attempt == 0) {
      spdlog::warn("{} is not a two-speaker dialogue; re-requesting", what);
      add_correction(req, text,
                     "That is not a usable transcript. Write a dialogue in which every line starts with a speaker "
                     "label such as \"Doctor:\" or \"Patient:\", with at least two speakers.");
    }
  }
  throw RuntimeFailure(fmt::format("{} failed dialogue validation after one re-request", what));
}

}  // namespace

std::string synthesize_transcript(const CaseContext& context, const SynthesisConfig& config,
                                  const StagePrompts& prompts, llm::ChatClient& client) {
  if (trim(context.description).empty()) throw UsageError("synthesize_transcript: empty context");
  auto messages = prompts.transcript.render({{"specialty", config.specialty}, {"context", context.description}});
  return request_dialogue(make_request(config.writer, std::move(messages), false), client,
                          fmt::format("transcript for {}", context.topic_id));
}

CritiqueResult critique_transcript(const std::string& transcript, const SynthesisConfig& config,
                                   const StagePrompts& prompts, llm::ChatClient& client) {
  if (trim(transcript).empty()) throw UsageError("critique_transcript: empty transcript");
  auto req = make_request(config.critic,
                          prompts.critique.render({{"specialty", config.specialty}, {"transcript", transcript}}),
                          true);
  for (int attempt = 0;; ++attempt) {
    std::string reply = client.chat(req).content;
    try {
      return parse_critique(reply, config.pass_threshold);
    } catch (const ValidationError& e) {
      if (attempt == 1) throw RuntimeFailure(fmt::format("critique unusable after one re-ask: {}", e.what()));
      spdlog::warn("critique unusable ({}); re-asking", e.what());
      add_correction(req, reply,
                     fmt::format("Your reply could not be used: {}. Reply with only the JSON object; every score "
                                 "is an integer from 1 to 5.",
                                 e.what()));
    }
  }
}

std::string revise_transcript(const std::string& transcript, const CritiqueResult& critique,
                              const SynthesisConfig& config, const StagePrompts& prompts, llm::ChatClient& client) {
  if (critique.passed) throw UsageError("revise_transcript: critique already passed");
  auto messages = prompts.revise.render({{"specialty", config.specialty},
                                         {"transcript", transcript},
                                         {"completeness", std::to_string(critique.completeness)},
                                         {"clinical_relevance", std::to_string(critique.clinical_relevance)},
                                         {"realism", std::to_string(critique.realism)},
                                         {"feedback", critique.feedback}});
  return request_dialogue(make_request(config.writer, std::move(messages), false), client, "revised transcript");
}

NoteTransform transform_to_note(const std::string& transcript, const SynthesisConfig& config,
                                const StagePrompts& prompts, const note::SectionSchema& schema,
                                llm::ChatClient& client) {
  auto req = make_request(config.formatter,
                          prompts.note.render({{"specialty", config.specialty},
                                               {"section_headings", heading_list(schema)},
                                               {"transcript", transcript}}),
                          false);
  std::string text;
  for (int attempt = 0; attempt < 2; ++attempt) {
    text = std::string(trim(client.chat(req).content));
    if (!text.empty() && note::parse_note(text, schema).has_recognized_section()) return {text, true};
    if (attempt == 0) {
      spdlog::warn("note has no recognized section; re-requesting");
      add_correction(req, text,
                     "The note must use the listed section headings, each on its own line starting with \"## \". "
                     "Write the note again.");
    }
  }
  if (text.empty()) throw RuntimeFailure("note transform returned empty output twice");
  spdlog::warn("note stored without recognized sections");
  return {text, false};
}

Json SynthRecord::to_json() const {
  Json j;
  j["id"] = id;
  j["transcript"] = transcript;
  j["note"] = note;
  j["source"] = "synthetic";
  j["critique_passed"] = critique_passed;
  j["revisions"] = revisions;
  j["warnings"] = warnings;
  return j;
}

PipelineOutcome run_pipeline(const SynthesisConfig& config, const StagePrompts& prompts,
                             const note::SectionSchema& schema, llm::ChatClient& client) {
  config.validate();
  check_or_write_manifest(config, prompts, schema);
  std::vector<Topic> topics = load_or_make_topics(config, prompts, client);

  size_t limit = config.pilot ? std::min(*config.pilot, config.count) : config.count;
  std::vector<std::optional<SynthRecord>> slots(limit);
  PipelineOutcome out;
  std::mutex mu;
  parallel_for(limit, client.config().max_concurrency, [&](size_t i) {
    try {
      slots[i] = run_record(i, topics[i], config, prompts, schema, client);
    } catch (const std::exception& e) {
      spdlog::error("synthesis record {} failed: {}", i, e.what());
      std::lock_guard lock(mu);
      out.failures.emplace(i, e.what());
    }
  });
  for (auto& s : slots) {
    if (s) out.records.push_back(std::move(*s));
  }
  out.stopped_for_pilot = limit < config.count;
  return out;
}

PipelineOutcome run_pipeline_to_file(const SynthesisConfig& config, const StagePrompts& prompts,
                                     const note::SectionSchema& schema, llm::ChatClient& client,
                                     const fs::path& out) {
  PipelineOutcome outcome = run_pipeline(config, prompts, schema, client);
  if (!outcome.failures.empty()) {
    std::string list;
    for (const auto& [index, what] : outcome.failures) list += fmt::format("\n  record {}: {}", index, what);
    throw RuntimeFailure(fmt::format("{} synthesis record(s) failed; rerun to resume:{}", outcome.failures.size(),
                                     list));
  }
  std::string text;
  for (const auto& r : outcome.records) text += jsonl::dump(r.to_json()) + "\n";
  write_file_atomic(out, text);
  return outcome;
}

}  // namespace scribebench::synth
