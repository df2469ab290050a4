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

#include "scribebench/response_cache.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/errors.hpp"
#include "scribebench/jsonl.hpp"
#include "scribebench/util.hpp"

namespace scribebench {
namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResponseCache::entry_path(const std::string& key) const {
  if (key.size() < 2) throw UsageError("cache key too short");
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  fs::path p = entry_path(key);
  if (!fs::exists(p)) return std::nullopt;
  Json entry;
  try {
    entry = Json::parse(read_file(p));
  } catch (const Json::parse_error&) {
    spdlog::warn("ignoring unreadable cache entry {}", p.string());
    return std::nullopt;
  }
  if (!entry.is_object() || entry.value("key", "") != key || !entry.contains("response")) {
    spdlog::warn("ignoring mismatched cache entry {}", p.string());
    return std::nullopt;
  }
  const auto& response = entry["response"];
  return response.is_string() ? response.get<std::string>() : jsonl::dump(response);
}

bool ResponseCache::put(const std::string& key, const std::string& body) const {
  Json entry;
  entry["key"] = key;
  // Bodies are stored as parsed JSON when possible so entries stay readable.
  Json parsed = Json::parse(body, nullptr, false);
  if (parsed.is_discarded()) {
    entry["response"] = body;
  } else {
    entry["response"] = std::move(parsed);
  }
  return write_file_once(entry_path(key), jsonl::dump(entry) + "\n");
}

size_t ResponseCache::clear(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  size_t removed = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") ++removed;
  }
  fs::remove_all(dir);
  return removed;
}

}  // namespace scribebench
