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
#include <optional>
#include <string>

namespace scribebench {

/// On-disk, write-once store of response bodies keyed by a hex digest.
/// Entries live at <dir>/<key[0:2]>/<key>.json as
/// {"key": <digest>, "response": <body>}. Publishing is atomic and the first
/// writer wins, so concurrent writers of one key never corrupt it.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  /// Returns false if an entry for `key` already existed.
  bool put(const std::string& key, const std::string& body) const;

  /// Removes every entry; returns how many were deleted.
  static size_t clear(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::filesystem::path dir_;
};

}  // namespace scribebench
