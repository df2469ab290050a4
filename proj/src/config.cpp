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

#include "scribebench/config.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "scribebench/errors.hpp"
#include "scribebench/util.hpp"

namespace scribebench::cli {
namespace {

void reject_secrets(const Json& j, const std::string& where) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      std::string path = where.empty() ? key : where + "." + key;
      if (is_secret_key(key)) {
        throw ValidationError(fmt::format(
            "config key \"{}\" looks like a secret; secrets are read only from the environment variable named by "
            "api_key_env",
            path));
      }
      reject_secrets(value, path);
    }
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) reject_secrets(j[i], fmt::format("{}[{}]", where, i));
  }
}

template <typename T>
std::optional<T> parse_number(const std::optional<std::string>& text, const std::string& name) {
  if (!text) return std::nullopt;
  try {
    size_t used = 0;
    T v;
    if constexpr (std::is_floating_point_v<T>) {
      v = static_cast<T>(std::stod(*text, &used));
    } else {
      long long parsed = std::stoll(*text, &used);
      if (parsed < 0) throw std::invalid_argument("negative");
      v = static_cast<T>(parsed);
    }
    if (used != text->size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("{}=\"{}\" is not a valid number", name, *text));
  }
}

Json section(const Json& doc, const char* key) {
  if (!doc.contains(key)) return Json::object();
  if (!doc[key].is_object()) throw ValidationError(fmt::format("config \"{}\" must be an object", key));
  return doc[key];
}

}  // namespace

bool is_secret_key(std::string_view key) {
  std::string k = to_lower_ascii(key);
  for (std::string_view s : {"api_key", "apikey", "key", "token", "secret", "password", "authorization"}) {
    if (k == s) return true;
  }
  return false;
}

void ClientOverrides::apply(llm::ClientConfig& c) const {
  if (base_url) c.base_url = *base_url;
  if (api_key_env) c.api_key_env_name = *api_key_env;
  if (cache_dir) c.cache_dir = *cache_dir;
  if (max_concurrency) c.max_concurrency = *max_concurrency;
  if (requests_per_minute) c.requests_per_minute = *requests_per_minute;
  if (timeout_seconds) c.timeout_seconds = *timeout_seconds;
  if (max_retries) c.max_retries = *max_retries;
}

ClientOverrides overrides_from_env(const EnvLookup& env) {
  ClientOverrides o;
  o.base_url = env("SCRIBEBENCH_BASE_URL");
  o.api_key_env = env("SCRIBEBENCH_API_KEY_ENV");
  if (auto dir = env("SCRIBEBENCH_CACHE_DIR")) o.cache_dir = *dir;
  o.max_concurrency = parse_number<size_t>(env("SCRIBEBENCH_MAX_CONCURRENCY"), "SCRIBEBENCH_MAX_CONCURRENCY");
  o.requests_per_minute =
      parse_number<size_t>(env("SCRIBEBENCH_REQUESTS_PER_MINUTE"), "SCRIBEBENCH_REQUESTS_PER_MINUTE");
  o.timeout_seconds = parse_number<double>(env("SCRIBEBENCH_TIMEOUT_S"), "SCRIBEBENCH_TIMEOUT_S");
  o.max_retries = parse_number<int>(env("SCRIBEBENCH_MAX_RETRIES"), "SCRIBEBENCH_MAX_RETRIES");
  return o;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

RunConfig RunConfig::from_json(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_secrets(doc, "");
  RunConfig c;
  try {
    if (doc.contains("client")) c.client = llm::ClientConfig::from_json(doc["client"]);
    if (doc.contains("schema")) c.schema_path = doc["schema"].get<std::string>();
    if (doc.contains("prompt_dir")) c.prompt_dir = doc["prompt_dir"].get<std::string>();
    Json profiles = section(doc, "profiles");
    for (const auto& [id, profile] : profiles.items()) {
      if (!profile.is_object()) throw ValidationError(fmt::format("profile \"{}\" must be an object", id));
      c.profiles.emplace(id, profile);
    }
    c.judge = section(doc, "judge");
    c.synthesis = section(doc, "synthesis");
    Json emb = section(doc, "embedding");
    if (emb.contains("backend")) c.embedding.backend = emb["backend"].get<std::string>();
    if (emb.contains("endpoint")) c.embedding.endpoint = emb["endpoint"].get<std::string>();
    if (emb.contains("model")) c.embedding.model = emb["model"].get<std::string>();
    if (emb.contains("cache_dir")) c.embedding.cache_dir = emb["cache_dir"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("config: {}", e.what()));
  }
  if (c.schema_path) c.set_schema_path(*c.schema_path);
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw UsageError(fmt::format("config file {} does not exist", path.string()));
  Json doc = Json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw ValidationError(fmt::format("{}: not valid JSON", path.string()));
  RunConfig c = from_json(doc);
  c.config_path = path;
  return c;
}

llm::ClientConfig RunConfig::client_for(const Json& sec) const {
  llm::ClientConfig c = client;
  if (sec.is_object() && sec.contains("client")) c = llm::ClientConfig::from_json(sec["client"], c);
  overrides.apply(c);
  c.validate();
  return c;
}

gen::GenerationProfile RunConfig::profile(const std::string& id, const std::optional<std::string>& model_flag) const {
  Json raw = Json::object();
  if (auto it = profiles.find(id); it != profiles.end()) {
    raw = it->second;
  } else if (!model_flag) {
    std::string known;
    for (const auto& [name, _] : profiles) known += (known.empty() ? "" : ", ") + name;
    throw UsageError(fmt::format("unknown profile \"{}\" (configured: {}); pass --model to define it ad hoc", id,
                                 known.empty() ? "none" : known));
  }
  llm::ClientConfig c = client_for(raw);
  raw.erase("client");
  if (model_flag) raw["model"] = *model_flag;
  return gen::GenerationProfile::from_json(id, raw, c);
}

judge::JudgeConfig RunConfig::judge_config() const {
  judge::JudgeConfig j;
  j.client = client_for(judge);
  try {
    if (judge.contains("model")) j.judge_model = judge["model"].get<std::string>();
    if (judge.contains("temperature")) j.temperature = judge["temperature"].get<double>();
    if (judge.contains("include_transcript")) j.include_transcript = judge["include_transcript"].get<bool>();
    if (judge.contains("max_reasks")) j.max_reasks = judge["max_reasks"].get<int>();
    if (judge.contains("max_tokens")) j.max_tokens = judge["max_tokens"].get<int>();
    if (judge.contains("prompt_template")) j.prompt_template_id = judge["prompt_template"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("config judge: {}", e.what()));
  }
  if (j.max_reasks < 0) throw ValidationError("config judge: max_reasks must be >= 0");
  return j;
}

synth::SynthesisConfig RunConfig::synthesis_config() const {
  synth::SynthesisConfig s;
  const Json& j = synthesis;
  try {
    if (j.contains("specialty")) s.specialty = j["specialty"].get<std::string>();
    if (j.contains("max_revision_iters")) s.max_revision_iters = j["max_revision_iters"].get<int>();
    if (j.contains("pass_threshold")) s.pass_threshold = j["pass_threshold"].get<int>();
    if (j.contains("topics_per_request")) s.topics_per_request = j["topics_per_request"].get<size_t>();
    if (j.contains("checkpoint_dir")) s.checkpoint_dir = j["checkpoint_dir"].get<std::string>();
    if (j.contains("model")) {
      std::string model = j["model"].get<std::string>();
      s.writer.model = s.critic.model = s.formatter.model = model;
    }
    if (j.contains("writer")) s.writer = synth::StageProfile::from_json(j["writer"], s.writer);
    if (j.contains("critic")) s.critic = synth::StageProfile::from_json(j["critic"], s.critic);
    if (j.contains("formatter")) s.formatter = synth::StageProfile::from_json(j["formatter"], s.formatter);
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("config synthesis: {}", e.what()));
  }
  return s;
}

const note::SectionSchema& RunConfig::schema() const {
  return schema_ ? *schema_ : note::SectionSchema::default_schema();
}

void RunConfig::set_schema_path(const std::filesystem::path& path) {
  schema_path = path;
  schema_ = std::make_shared<note::SectionSchema>(note::SectionSchema::load(path));
}

Json RunConfig::to_json() const {
  Json j;
  j["config_path"] = config_path ? Json(config_path->string()) : Json(nullptr);
  llm::ClientConfig resolved = client;
  overrides.apply(resolved);
  j["client"] = resolved.to_json();
  j["schema"] = schema_path ? Json(schema_path->string()) : Json(nullptr);
  j["schema_hash"] = sha256_hex(jsonl::dump(schema().to_json()));
  j["prompt_dir"] = prompt_dir ? Json(prompt_dir->string()) : Json(nullptr);
  Json profs = Json::object();
  for (const auto& [id, p] : profiles) profs[id] = p;
  j["profiles"] = std::move(profs);
  j["judge"] = judge;
  j["synthesis"] = synthesis;
  j["embedding"] = {{"backend", embedding.backend},
                    {"endpoint", embedding.endpoint},
                    {"model", embedding.model},
                    {"cache_dir", embedding.cache_dir ? Json(embedding.cache_dir->string()) : Json(nullptr)}};
  return j;
}

}  // namespace scribebench::cli
