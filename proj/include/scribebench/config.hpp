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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "scribebench/generator.hpp"
#include "scribebench/judge.hpp"
#include "scribebench/llm_client.hpp"
#include "scribebench/synthesis.hpp"

namespace scribebench::cli {

inline constexpr std::string_view kConfigEnv = "SCRIBEBENCH_CONFIG";

/// Client settings that environment variables or flags may override on
/// top of whatever the config file says.
struct ClientOverrides {
  std::optional<std::string> base_url;
  std::optional<std::string> api_key_env;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<size_t> max_concurrency;
  std::optional<size_t> requests_per_minute;
  std::optional<double> timeout_seconds;
  std::optional<int> max_retries;

  void apply(llm::ClientConfig& c) const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads SCRIBEBENCH_BASE_URL, SCRIBEBENCH_API_KEY_ENV, SCRIBEBENCH_CACHE_DIR,
/// SCRIBEBENCH_MAX_CONCURRENCY, SCRIBEBENCH_REQUESTS_PER_MINUTE,
/// SCRIBEBENCH_TIMEOUT_S and SCRIBEBENCH_MAX_RETRIES.
ClientOverrides overrides_from_env(const EnvLookup& env);

EnvLookup process_env();

struct EmbeddingSettings {
  std::string backend = "mock_one_hot";  // or "http"
  std::string endpoint;
  std::string model = "mock-one-hot";
  std::optional<std::filesystem::path> cache_dir;
};

/// Everything a command needs, merged from (highest first) flags,
/// environment and config file.
struct RunConfig {
  std::optional<std::filesystem::path> config_path;
  llm::ClientConfig client;
  std::optional<std::filesystem::path> schema_path;
  std::optional<std::filesystem::path> prompt_dir;
  std::map<std::string, Json> profiles;  // raw profile objects by id
  Json judge = Json::object();
  Json synthesis = Json::object();
  EmbeddingSettings embedding;
  ClientOverrides overrides;  // env then flags, applied to every client

  /// Parses the config document. Secret-looking keys anywhere in it are a
  /// ValidationError.
  static RunConfig from_json(const Json& doc);
  static RunConfig load(const std::filesystem::path& path);

  /// A section's client: top-level client, then the section's own
  /// "client" object, then overrides.
  llm::ClientConfig client_for(const Json& section) const;

  gen::GenerationProfile profile(const std::string& id, const std::optional<std::string>& model_flag) const;
  judge::JudgeConfig judge_config() const;
  synth::SynthesisConfig synthesis_config() const;
  /// Loaded schema when schema_path is set, else the default schema.
  const note::SectionSchema& schema() const;
  void set_schema_path(const std::filesystem::path& path);

  /// Resolved configuration for manifests. Holds the name of the API key
  /// variable, never its value.
  Json to_json() const;

 private:
  std::shared_ptr<note::SectionSchema> schema_;
};

/// Keys treated as secrets wherever they appear in a config document.
bool is_secret_key(std::string_view key);

}  // namespace scribebench::cli
