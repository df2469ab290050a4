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

#include <stdexcept>
#include <string>

namespace scribebench {

/// Base for every error raised by the toolkit. The subclasses partition
/// failures into the three classes the command line maps to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad flags or option values (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Network, model endpoint, or filesystem failure (exit code 2).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

/// Input files or model output that fail validation (exit code 3).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace scribebench
