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

#include <doctest.h>

#include "scribebench/errors.hpp"
#include "scribebench/prompt_template.hpp"
#include "scribebench/util.hpp"
#include "scripted_models.hpp"

using namespace scribebench;
using scribebench::testing::TempDir;

TEST_CASE("parse and render") {
  auto t = PromptTemplate::parse("template_id: mine\n=== system ===\nBe brief.\n=== user ===\nNote for:\n{{transcript}}\n",
                                 "inline");
  CHECK(t.id() == "mine");
  CHECK(t.system_text() == "Be brief.");
  CHECK(t.occurrences("transcript") == 1);
  auto msgs = t.render({{"transcript", "T"}});
  REQUIRE(msgs.size() == 2);
  CHECK(msgs[0].role == llm::Role::system);
  CHECK(msgs[1].content.find("T") != std::string::npos);
  CHECK_THROWS_AS(t.render({}), ValidationError);
}

TEST_CASE("substitution is single pass") {
  CHECK(substitute("a {{x}} b", {{"x", "{{x}}"}}) == "a {{x}} b");
  CHECK(substitute("{{x}}{{y}}", {{"x", "{{y}}"}, {"y", "2"}}) == "{{y}}2");
  CHECK(substitute("no placeholders", {}) == "no placeholders");
  CHECK_THROWS_AS(substitute("{{missing}}", {}), ValidationError);
}

TEST_CASE("placeholder count is enforced") {
  auto none = PromptTemplate::parse("template_id: t\n=== system ===\ns\n=== user ===\nnothing here\n", "x");
  CHECK_THROWS_AS(none.require_once_in_user("transcript"), ValidationError);
  auto twice = PromptTemplate::parse(
      "template_id: t\n=== system ===\ns\n=== user ===\n{{transcript}} and {{transcript}}\n", "x");
  CHECK_THROWS_AS(twice.require_once_in_user("transcript"), ValidationError);
}

TEST_CASE("malformed template files are rejected") {
  CHECK_THROWS_AS(PromptTemplate::parse("=== system ===\ns\n=== user ===\nu\n", "x"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("template_id: t\n=== user ===\nu\n", "x"), ValidationError);
}

TEST_CASE("builtins and directory override") {
  auto names = PromptTemplate::builtin_names();
  for (const char* n : {"note_default", "judge_default", "synth_topics", "synth_context", "synth_transcript",
                        "synth_critique", "synth_revise", "synth_note"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  CHECK_NOTHROW(PromptTemplate::builtin("note_default").require_once_in_user("transcript"));
  CHECK_THROWS_AS(PromptTemplate::builtin("nope"), UsageError);

  TempDir dir;
  write_file_atomic(dir / "note_default.txt",
                    "template_id: note_default\n=== system ===\nCustom.\n=== user ===\n{{transcript}}\n");
  CHECK(PromptTemplate::resolve("note_default", dir.path()).system_text() == "Custom.");
  CHECK(PromptTemplate::resolve("judge_default", dir.path()).digest() ==
        PromptTemplate::builtin("judge_default").digest());
  CHECK(PromptTemplate::resolve("note_default", std::nullopt).digest() ==
        PromptTemplate::builtin("note_default").digest());
  CHECK(PromptTemplate::resolve("note_default", dir.path()).digest() !=
        PromptTemplate::builtin("note_default").digest());
}
