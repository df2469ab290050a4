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
#include <string>
#include <string_view>
#include <vector>

namespace scribebench {

/// Lowercase hex SHA-256 of `data` (64 characters).
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes.
std::string file_sha256_hex(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`, so
/// readers never observe a partially written file. Creates parent dirs.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Like write_file_atomic but never replaces an existing file. Returns false
/// when `path` already existed.
bool write_file_once(const std::filesystem::path& path, std::string_view contents);

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);

}  // namespace scribebench
