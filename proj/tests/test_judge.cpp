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

#include <atomic>
#include <random>

#include <doctest.h>

#include "scribebench/errors.hpp"
#include "scribebench/judge.hpp"
#include "scribebench/util.hpp"
#include "scripted_models.hpp"

using namespace scribebench;
using namespace scribebench::judge;
using scribebench::testing::contains;
using scribebench::testing::judge_json;
using scribebench::testing::last_user;
using scribebench::testing::MockReply;
using scribebench::testing::MockServer;
using scribebench::testing::ScriptedModels;
using scribebench::testing::system_text;
using scribebench::testing::TempDir;

namespace {

const PromptTemplate& tmpl() {
  static PromptTemplate t = PromptTemplate::builtin("judge_default");
  return t;
}

JudgeConfig config_for(const MockServer& server, const TempDir& dir) {
  JudgeConfig c;
  c.client.base_url = server.base_url();
  c.client.cache_dir = dir / "cache";
  c.client.max_retries = 0;
  return c;
}

JudgeInput input(int i) {
  return {fmt::format("rec-{:03}", i), "ondevice", fmt::format("Doctor: Case {}.\nPatient: Tired.", i),
          fmt::format("## Assessment\nCase {} hypothyroid.", i), fmt::format("## Assessment\nCase {} euthyroid.", i)};
}

Json valid_object() { return Json::parse(judge_json(4, 3, 5, 4, 4, 4, 4, true, "No", "Minor")); }

// Whether a wire value is acceptable for a field, decided independently of
// the parser.
bool likert_ok(const Json& v) {
  if (!v.is_number()) return false;
  double d = v.get<double>();
  return d == std::floor(d) && d >= 1 && d <= 5;
}
bool severity_ok(const Json& v) {
  if (!v.is_string()) return false;
  std::string s = to_lower_ascii(v.get<std::string>());
  return s == "no" || s == "minor" || s == "major";
}
bool negation_ok(const Json& v) {
  if (v.is_boolean()) return true;
  if (!v.is_string()) return false;
  std::string s = to_lower_ascii(v.get<std::string>());
  return s == "true" || s == "false" || s == "yes" || s == "no";
}

Json random_value(std::mt19937& rng) {
  switch (rng() % 9) {
    case 0: return static_cast<int>(rng() % 9) - 1;
    case 1: return 2.5;
    case 2: return "3";
    case 3: return nullptr;
    case 4: return "MINOR";
    case 5: return "severe";
    case 6: return rng() % 2 == 0;
    case 7: return "Yes";
    default: return Json::array({1});
  }
}

}  // namespace

TEST_CASE("severity parsing is case-insensitive") {
  CHECK(parse_severity("MINOR") == Severity::minor);
  CHECK(parse_severity("no") == Severity::no);
  CHECK(parse_severity("Major") == Severity::major);
  CHECK_FALSE(parse_severity("severe"));
  CHECK(to_string(Severity::minor) == "Minor");
}

TEST_CASE("parse well-formed and malformed replies") {
  auto a = parse_judge_response(judge_json(4, 3, 5, 4, 4, 4, 4, true, "MINOR", "no"));
  CHECK(a.factual_correctness() == 4);
  CHECK(a.likert[2] == 5);
  CHECK(a.negation_detection);
  CHECK(a.hallucination == Severity::minor);
  CHECK(a.omission == Severity::no);
  CHECK(a.rationale == "scripted");

  auto fenced = parse_judge_response("Sure.\n```json\n" + judge_json(1, 1, 1, 1, 1, 1, 1, false, "No", "No") + "\n```");
  CHECK(fenced.likert[0] == 1);

  try {
    parse_judge_response(judge_json(6, 3, 5, 4, 4, 4, 4, true, "No", "No"));
    FAIL("expected range error");
  } catch (const JudgeParseError& e) {
    CHECK(e.field() == "factual_correctness");
    CHECK(contains(e.what(), "factual_correctness"));
  }
  Json missing = valid_object();
  missing.erase("omission");
  CHECK_THROWS_AS(parse_judge_response(missing.dump()), JudgeParseError);
  CHECK_THROWS_AS(parse_judge_response("no object at all"), JudgeParseError);
}

TEST_CASE("property: fuzzed wire objects parse only into valid assessments") {
  std::mt19937 rng(1234);
  std::vector<std::string> fields(kLikertFields.begin(), kLikertFields.end());
  fields.insert(fields.end(), {"negation_detection", "hallucination", "omission"});
  int accepted = 0;
  for (int iter = 0; iter < 600; ++iter) {
    Json obj = valid_object();
    int mutations = static_cast<int>(rng() % 3);
    for (int m = 0; m < mutations; ++m) {
      const std::string& f = fields[rng() % fields.size()];
      if (rng() % 5 == 0) {
        obj.erase(f);
      } else {
        obj[f] = random_value(rng);
      }
    }
    bool expect_ok = true;
    for (auto f : kLikertFields) expect_ok &= obj.contains(std::string(f)) && likert_ok(obj[std::string(f)]);
    expect_ok &= obj.contains("negation_detection") && negation_ok(obj["negation_detection"]);
    expect_ok &= obj.contains("hallucination") && severity_ok(obj["hallucination"]);
    expect_ok &= obj.contains("omission") && severity_ok(obj["omission"]);
    try {
      JudgeAssessment a = parse_judge_response(obj.dump());
      CHECK(expect_ok);
      CHECK_NOTHROW(a.validate());
      for (int v : a.likert) {
        CHECK(v >= 1);
        CHECK(v <= 5);
      }
      ++accepted;
    } catch (const JudgeParseError&) {
      CHECK_FALSE(expect_ok);
    }
  }
  CHECK(accepted > 50);
}

TEST_CASE("composite score") {
  JudgeAssessment a;
  a.likert = {3, 3, 3, 3, 3, 3, 3};
  CHECK(composite_score(a) == 3.0);
  a.likert = {5, 5, 5, 5, 5, 5, 5};
  CHECK(composite_score(a) == 5.0);
  a.likert = {4, 3, 5, 4, 4, 4, 4};
  CHECK(composite_score(a) == doctest::Approx(4.0));

  std::mt19937 rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    for (auto& v : a.likert) v = 1 + static_cast<int>(rng() % 5);
    double before = composite_score(a);
    size_t k = rng() % kLikertCount;
    if (a.likert[k] < 5) {
      ++a.likert[k];
      CHECK(composite_score(a) >= before);
    }
  }
}

TEST_CASE("judge prompt construction") {
  auto with = build_judge_prompt(std::string("Doctor: hi\nPatient: hello"), "REF NOTE", "CAND NOTE", tmpl());
  REQUIRE(with.size() == 2);
  std::string user = with[1].content;
  CHECK(contains(user, "TRANSCRIPT"));
  CHECK(contains(user, "REF NOTE"));
  CHECK(contains(user, "CAND NOTE"));
  CHECK(contains(with[0].content, "the TRANSCRIPT"));
  for (auto f : kLikertFields) CHECK(contains(with[0].content, std::string(f)));

  auto without = build_judge_prompt(std::nullopt, "REF NOTE", "CAND NOTE", tmpl());
  CHECK_FALSE(contains(without[1].content, "Doctor: hi"));
  CHECK(contains(without[0].content, "the REFERENCE NOTE"));
  CHECK_FALSE(contains(without[0].content, "the TRANSCRIPT"));

  CHECK_THROWS_AS(build_judge_prompt(std::nullopt, "REF", "", tmpl()), UsageError);
  CHECK_THROWS_AS(build_judge_prompt(std::nullopt, "", "CAND", tmpl()), UsageError);
}

TEST_CASE("judge_pair re-asks once, then gives up") {
  std::atomic<int> bad_replies{1};
  std::atomic<int> calls{0};
  MockServer server([&](const Json& body) {
    ++calls;
    CHECK(body["response_format"]["type"] == "json_object");
    CHECK(body["temperature"] == 0.0);
    if (bad_replies-- > 0) return MockReply{200, judge_json(9, 3, 3, 3, 3, 3, 3, true, "No", "No")};
    return MockReply{200, judge_json(3, 3, 3, 3, 3, 3, 3, true, "No", "No")};
  });
  TempDir dir;
  auto cfg = config_for(server, dir);
  llm::ChatClient client(cfg.client);
  auto r = judge_pair(input(1), cfg, tmpl(), client);
  CHECK(r.reask_count == 1);
  CHECK(r.assessment.likert[0] == 3);
  CHECK(calls.load() == 2);
  CHECK(contains(last_user(server.seen().back().body), "factual_correctness"));

  bad_replies = 5;
  calls = 0;
  CHECK_THROWS_AS(judge_pair(input(2), cfg, tmpl(), client), JudgeParseError);
  CHECK(calls.load() == 2);
}

TEST_CASE("judge_batch: 100 records, failures listed, warm rerun identical") {
  ScriptedModels models;
  MockServer server([&](const Json& body) {
    if (contains(body.dump(), "Case 7.")) return MockReply{200, "I cannot grade this."};
    return models(body);
  });
  TempDir dir;
  auto cfg = config_for(server, dir);
  std::vector<JudgeInput> inputs;
  for (int i = 0; i < 100; ++i) inputs.push_back(input(i));

  llm::ChatClient client(cfg.client);
  auto out = judge_batch(inputs, cfg, tmpl(), client);
  CHECK(out.judged.size() == 99);
  REQUIRE(out.failures.size() == 1);
  CHECK(out.failures.count("rec-007") == 1);
  size_t j = 0;
  for (const auto& in : inputs) {
    if (in.id == "rec-007") continue;
    CHECK(out.judged[j++].id == in.id);
  }
  std::string first;
  for (const auto& r : out.judged) first += jsonl::dump(to_json(r)) + "\n";

  size_t calls = server.requests();
  llm::ChatClient warm(cfg.client);
  auto again = judge_batch(inputs, cfg, tmpl(), warm);
  std::string second;
  for (const auto& r : again.judged) second += jsonl::dump(to_json(r)) + "\n";
  CHECK(first == second);
  CHECK(server.requests() == calls);

  auto empty = judge_batch({}, cfg, tmpl(), warm);
  CHECK(empty.judged.empty());
  CHECK(empty.failures.empty());
}

TEST_CASE("judged records round-trip and reject duplicates") {
  JudgedRecord r{"a", "m", parse_judge_response(judge_json(1, 2, 3, 4, 5, 1, 2, false, "Major", "No")), 1};
  auto back = judged_from_json(to_json(r), "x");
  CHECK(back.id == "a");
  CHECK(back.assessment == r.assessment);
  CHECK(back.reask_count == 1);

  TempDir dir;
  std::string line = jsonl::dump(to_json(r)) + "\n";
  write_file_atomic(dir / "j.jsonl", line + line);
  CHECK_THROWS_AS(load_judged(dir / "j.jsonl"), ValidationError);
}

TEST_CASE("join_inputs") {
  auto schema = note::SectionSchema::default_schema();
  std::vector<data::ReferencePair> refs = {
      {"a", data::TranscriptRecord{"a", "Doctor: bundled\nPatient: x", data::Source::aci_bench, {}},
       note::parse_note("## Plan\nRest.", schema)},
      {"b", std::nullopt, note::parse_note("## Plan\nWalk.", schema)}};
  std::vector<data::CandidateRecord> cands = {{"a", "m", note::parse_note("## Plan\nRest.", schema), "h", {}},
                                              {"b", "m", note::parse_note("## Plan\nRun.", schema), "h", {}}};
  std::vector<data::TranscriptRecord> transcripts = {{"b", "Doctor: separate\nPatient: y", data::Source::other, {}}};

  auto joined = join_inputs(refs, cands, transcripts, true);
  REQUIRE(joined.size() == 2);
  CHECK(contains(*joined[0].transcript, "bundled"));
  CHECK(contains(*joined[1].transcript, "separate"));

  CHECK_THROWS_AS(join_inputs(refs, cands, {}, true), ValidationError);
  auto no_t = join_inputs(refs, cands, {}, false);
  CHECK_FALSE(no_t[1].transcript);

  cands.push_back({"zzz", "m", note::parse_note("## Plan\nx", schema), "h", {}});
  try {
    join_inputs(refs, cands, transcripts, true);
    FAIL("expected orphan error");
  } catch (const ValidationError& e) {
    CHECK(contains(e.what(), "zzz"));
  }
}
