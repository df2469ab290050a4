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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scribebench::embed {

/// Scores computed out of process (e.g. a learned metric such as BLEURT).
struct ExternalScores {
  std::string metric;
  std::map<std::string, double> by_id;
  std::vector<std::string> warnings;
};

/// Reads `{"id","metric","score"}` lines and keeps the rows whose metric
/// equals `metric_name`. Duplicate ids for that metric and malformed lines
/// raise ValidationError; ids simply absent from the file stay absent.
ExternalScores ingest_external_scores(const std::filesystem::path& path, std::string_view metric_name);

}  // namespace scribebench::embed
