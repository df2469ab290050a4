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

#include <cstdlib>
#include <map>
#include <sstream>

#include <doctest.h>

#include "scribebench/cli.hpp"
#include "scribebench/util.hpp"
#include "scripted_models.hpp"

using namespace scribebench;
using scribebench::testing::contains;
using scribebench::testing::MockReply;
using scribebench::testing::MockServer;
using scribebench::testing::ScriptedModels;
using scribebench::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  cli::EnvLookup lookup = [env](const std::string& name) -> std::optional<std::string> {
    auto it = env.find(name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  Run r;
  r.rc = cli::run_cli(args, out, err, lookup);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string p(const fs::path& path) { return path.string(); }

std::vector<std::string> with_client(const MockServer& server, const TempDir& dir, std::vector<std::string> args) {
  std::vector<std::string> all = {"--base-url", server.base_url(), "--cache-dir", p(dir / "cache"),
                                  "--max-retries", "0", "-q"};
  all.insert(all.end(), args.begin(), args.end());
  return all;
}

std::string tree_text(const fs::path& dir) {
  std::string text;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) text += read_file(e.path());
  }
  return text;
}

}  // namespace

TEST_CASE("version") {
  Run r = run({"--version"});
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "scribebench 0.1.0 (format 1)"));
}

TEST_CASE("secret-bearing flags are rejected") {
  for (const char* flag : {"--api-key=abc", "--api-key", "--token", "--password=x", "--secret"}) {
    Run r = run({"generate", flag, "--dataset", "x", "--profile", "p", "--out", "y"});
    CHECK(r.rc == 1);
    CHECK(contains(r.err, "environment variable"));
    CHECK_FALSE(contains(r.err, "abc"));
  }
}

TEST_CASE("usage errors exit 1 with help text") {
  TempDir dir;
  write_file_atomic(dir / "r.jsonl", R"({"id":"a","note":"## Plan\nRest."})" "\n");
  write_file_atomic(dir / "c.jsonl", R"({"id":"a","model":"m","note":"## Plan\nRest.","gen_config_hash":"h"})" "\n");
  Run r = run({"evaluate", "--references", p(dir / "r.jsonl"), "--candidates", p(dir / "c.jsonl"), "--metrics",
               "rouge,bleu", "--out", p(dir / "s.jsonl")});
  CHECK(r.rc == 1);
  CHECK(contains(r.err, "bleu"));
  CHECK(contains(r.err, "--metrics"));
  CHECK_FALSE(fs::exists(dir / "s.jsonl"));

  CHECK(run({}).rc == 1);
  CHECK(run({"generate"}).rc == 1);
  CHECK(run({"frobnicate"}).rc == 1);
  Run missing = run({"generate", "--dataset", p(dir / "nope.jsonl"), "--profile", "x", "--model", "m", "--out",
                     p(dir / "o.jsonl")});
  CHECK(missing.rc == 1);
}

TEST_CASE("invalid input exits 3") {
  TempDir dir;
  write_file_atomic(dir / "bad.jsonl", "{\"id\":\"a\"}\n");
  Run r = run({"--cache-dir", p(dir / "cache"), "generate", "--dataset", p(dir / "bad.jsonl"), "--profile", "x",
               "--model", "m", "--out", p(dir / "o.jsonl")});
  CHECK(r.rc == 3);
  CHECK(contains(r.err, ":1"));

  write_file_atomic(dir / "cfg.json", R"({"client":{"base_url":"http://x:1","api_key":"sk-123"}})");
  Run secret = run({"--config", p(dir / "cfg.json"), "cache", "clear", "--dir", p(dir / "cache")});
  CHECK(secret.rc == 3);
  CHECK(contains(secret.err, "client.api_key"));
  CHECK_FALSE(contains(secret.err, "sk-123"));
}

TEST_CASE("report with mismatched ids exits 3 listing orphans") {
  TempDir dir;
  write_file_atomic(dir / "s.jsonl", R"({"id":"a","model":"m","rouge1":null,"rouge2":null,"rougeL":null,)"
                                     R"("rougeLsum":null,"bertscore":null,"bleurt":null})" "\n");
  write_file_atomic(dir / "j.jsonl",
                    R"({"id":"zz-orphan","model":"m","factual_correctness":3,"completeness":3,"clinical_relevance":3,)"
                    R"("coherence_organization":3,"terminology_accuracy":3,"readability":3,"overall_quality":3,)"
                    R"("negation_detection":true,"hallucination":"No","omission":"No","rationale":"","reask_count":0})"
                    "\n");
  Run r = run({"report", "--scores", p(dir / "s.jsonl"), "--judged", p(dir / "j.jsonl"), "--dataset-label", "D",
               "--out-dir", p(dir / "rep")});
  CHECK(r.rc == 3);
  CHECK(contains(r.err, "zz-orphan"));
  CHECK(contains(r.err, "a,"));
}

TEST_CASE("transport failure exits 2") {
  TempDir dir;
  write_file_atomic(dir / "t.jsonl", R"({"id":"a","transcript":"Doctor: hi\nPatient: hello"})" "\n");
  Run r = run({"--base-url", "http://127.0.0.1:1", "--cache-dir", p(dir / "cache"), "--max-retries", "0",
               "--timeout", "1", "generate", "--dataset", p(dir / "t.jsonl"), "--profile", "x", "--model", "m",
               "--out", p(dir / "o.jsonl")});
  CHECK(r.rc == 2);
  CHECK(contains(r.err, "a"));
}

TEST_CASE("configuration precedence: file < environment < flags") {
  TempDir dir;
  write_file_atomic(dir / "t.jsonl", "");
  write_file_atomic(dir / "cfg.json",
                    fmt::format(R"({{"client":{{"base_url":"http://file:1","max_retries":7,"cache_dir":"{}"}},)"
                                R"("profiles":{{"base":{{"model":"file-model","temperature":0.1}}}}}})",
                                p(dir / "cache")));
  auto manifest_client = [&](const Run& r) {
    REQUIRE(r.rc == 0);
    return Json::parse(read_file(dir / "o.jsonl.manifest.json"))["config"]["client"];
  };
  std::vector<std::string> gen = {"generate", "--dataset", p(dir / "t.jsonl"), "--profile", "base", "--out",
                                  p(dir / "o.jsonl")};

  auto args = gen;
  args.insert(args.begin(), {"--config", p(dir / "cfg.json")});
  Json c = manifest_client(run(args));
  CHECK(c["base_url"] == "http://file:1");
  CHECK(c["max_retries"] == 7);

  c = manifest_client(run(gen, {{"SCRIBEBENCH_CONFIG", p(dir / "cfg.json")},
                                {"SCRIBEBENCH_BASE_URL", "http://env:2"},
                                {"SCRIBEBENCH_MAX_RETRIES", "5"}}));
  CHECK(c["base_url"] == "http://env:2");
  CHECK(c["max_retries"] == 5);

  args = gen;
  args.insert(args.begin(), {"--base-url", "http://flag:3"});
  c = manifest_client(run(args, {{"SCRIBEBENCH_CONFIG", p(dir / "cfg.json")}, {"SCRIBEBENCH_BASE_URL", "http://env:2"}}));
  CHECK(c["base_url"] == "http://flag:3");
  CHECK(c["max_retries"] == 7);

  CHECK(run(gen, {{"SCRIBEBENCH_CONFIG", p(dir / "cfg.json")}, {"SCRIBEBENCH_MAX_RETRIES", "many"}}).rc == 1);
}

TEST_CASE("api key reaches the endpoint but not logs, manifests or cache") {
  const char* secret = "sk-cli-5b1e77-never-persist";
  ::setenv("SCRIBEBENCH_CLI_TEST_KEY", secret, 1);
  ScriptedModels models;
  MockServer server(std::ref(models));
  TempDir dir;
  write_file_atomic(dir / "t.jsonl", R"({"id":"a","transcript":"Doctor: hi\nPatient: hello"})" "\n");
  auto args = with_client(server, dir,
                          {"--api-key-env", "SCRIBEBENCH_CLI_TEST_KEY", "-v", "generate", "--dataset",
                           p(dir / "t.jsonl"), "--profile", "x", "--model", "m", "--out", p(dir / "o.jsonl")});
  Run r = run(args);
  ::unsetenv("SCRIBEBENCH_CLI_TEST_KEY");
  REQUIRE(r.rc == 0);
  CHECK(server.seen().at(0).authorization == std::string("Bearer ") + secret);
  CHECK_FALSE(contains(tree_text(dir.path()), secret));
  CHECK_FALSE(contains(r.out + r.err, secret));
  CHECK(contains(read_file(dir / "o.jsonl.manifest.json"), "SCRIBEBENCH_CLI_TEST_KEY"));
}

TEST_CASE("end to end on three records, then a warm rerun with the endpoint down") {
  ScriptedModels models;
  MockServer server(std::ref(models));
  TempDir dir;
  auto step = [&](std::vector<std::string> args) {
    Run r = run(with_client(server, dir, std::move(args)));
    INFO(r.err);
    CHECK(r.rc == 0);
    return r;
  };

  step({"synthesize", "--count", "3", "--model", "writer", "--out", p(dir / "refs.jsonl")});
  CHECK(split_lines(read_file(dir / "refs.jsonl")).size() >= 3);
  CHECK(fs::exists(dir / "refs.jsonl.manifest.json"));

  auto pipeline = [&](const fs::path& root) {
    for (std::string arm : {"base", "ondevice"}) {
      fs::path cands = root / (arm + ".cands.jsonl");
      step({"generate", "--dataset", p(dir / "refs.jsonl"), "--profile", arm, "--model", arm + "-model", "--out",
            p(cands)});
      step({"evaluate", "--references", p(dir / "refs.jsonl"), "--candidates", p(cands), "--out",
            p(root / (arm + ".scores.jsonl"))});
      step({"judge", "--references", p(dir / "refs.jsonl"), "--candidates", p(cands), "--out",
            p(root / (arm + ".judged.jsonl"))});
      step({"report", "--scores", p(root / (arm + ".scores.jsonl")), "--judged", p(root / (arm + ".judged.jsonl")),
            "--dataset-label", "Synthetic", "--out-dir", p(root / (arm + ".report"))});
    }
    return step({"compare", "--baseline-dir", p(root / "base.report"), "--treatment-dir",
                 p(root / "ondevice.report"), "--out-dir", p(root / "comparison")});
  };

  fs::create_directories(dir / "first");
  pipeline(dir / "first");
  size_t calls = server.requests();
  CHECK(calls > 0);
  for (const char* f : {"tables.md", "tables.csv", "tables.jsonl", "aggregate.json", "run_manifest.json"}) {
    CHECK(fs::exists(dir / "first" / "base.report" / f));
  }
  CHECK(fs::exists(dir / "first" / "comparison" / "comparison.md"));
  CHECK(fs::exists(dir / "first" / "comparison" / "charts" / "text_similarity.svg"));
  CHECK(fs::exists(dir / "first" / "comparison" / "charts" / "hallucination.svg"));
  std::string md = read_file(dir / "first" / "base.report" / "tables.md");
  CHECK(contains(md, "| Synthetic | base |"));

  server.stop();
  fs::create_directories(dir / "second");
  pipeline(dir / "second");
  CHECK(server.requests() == calls);

  for (const auto& e : fs::recursive_directory_iterator(dir / "first")) {
    if (!e.is_regular_file() || contains(e.path().filename().string(), "manifest")) continue;
    fs::path rel = fs::relative(e.path(), dir / "first");
    INFO(rel.string());
    REQUIRE(fs::exists(dir / "second" / rel));
    CHECK(read_file(e.path()) == read_file(dir / "second" / rel));
  }

  Run cleared = run({"cache", "clear", "--dir", p(dir / "cache")});
  CHECK(cleared.rc == 0);
}
