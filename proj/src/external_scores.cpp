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

#include "scribebench/external_scores.hpp"

#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/errors.hpp"
#include "scribebench/jsonl.hpp"

namespace scribebench::embed {

ExternalScores ingest_external_scores(const std::filesystem::path& path, std::string_view metric_name) {
  ExternalScores out;
  out.metric = std::string(metric_name);
  std::map<std::string, size_t> first_line;
  auto lines = jsonl::read(path);
  for (const auto& line : lines) {
    std::string loc = fmt::format("{}:{}", path.string(), line.number);
    const std::string& id = jsonl::require_string(line.value, "id", loc);
    const std::string& metric = jsonl::require_string(line.value, "metric", loc);
    double score = jsonl::require_number(line.value, "score", loc);
    if (!std::isfinite(score)) throw ValidationError(fmt::format("{}: score is not finite", loc));
    if (metric != metric_name) continue;
    auto [it, inserted] = first_line.emplace(id, line.number);
    if (!inserted) {
      throw ValidationError(fmt::format("{}: duplicate id \"{}\" for metric {} (lines {} and {})",
                                        path.string(), id, metric_name, it->second, line.number));
    }
    out.by_id.emplace(id, score);
  }
  if (lines.empty()) {
    out.warnings.push_back(fmt::format("{}: no records", path.string()));
    spdlog::warn("{}: no records", path.string());
  } else if (out.by_id.empty()) {
    out.warnings.push_back(fmt::format("{}: no rows for metric {}", path.string(), metric_name));
    spdlog::warn("{}: no rows for metric {}", path.string(), metric_name);
  }
  return out;
}

}  // namespace scribebench::embed
