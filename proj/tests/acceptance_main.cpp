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

// Acceptance checks. Prints one line per criterion and exits non-zero if any
// criterion fails. Criterion 9 needs a served model and is skipped unless
// SCRIBEBENCH_ACI_SCORES names a scores file from such a run.

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <spdlog/spdlog.h>

#include "mock_server.hpp"
#include "scribebench/bertscore.hpp"
#include "scribebench/cli.hpp"
#include "scribebench/errors.hpp"
#include "scribebench/judge.hpp"
#include "scribebench/report.hpp"
#include "scribebench/rouge.hpp"
#include "scribebench/scores.hpp"
#include "scribebench/synthesis.hpp"
#include "scribebench/util.hpp"
#include "scripted_models.hpp"

extern char** environ;

using namespace scribebench;
using scribebench::testing::contains;
using scribebench::testing::MockReply;
using scribebench::testing::MockServer;
using scribebench::testing::ScriptedModels;
using scribebench::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { pass, fail, skip } kind = pass;
  std::string detail;
};

struct Checker {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  Outcome outcome(std::string ok_detail) const {
    if (problems.empty()) return {Outcome::pass, std::move(ok_detail)};
    std::string d = problems.front();
    if (problems.size() > 1) d += fmt::format(" (+{} more)", problems.size() - 1);
    return {Outcome::fail, d};
  }
};

rouge::TokenSeq random_seq(std::mt19937& rng, size_t vocab, size_t max_len) {
  rouge::TokenSeq s(std::uniform_int_distribution<size_t>(0, max_len)(rng));
  for (auto& t : s) t = "w" + std::to_string(std::uniform_int_distribution<size_t>(0, vocab - 1)(rng));
  return s;
}

// Clipped multiset intersection, counted naively.
size_t naive_overlap(const rouge::TokenSeq& a, const rouge::TokenSeq& b, size_t n, size_t& na, size_t& nb) {
  auto grams = [n](const rouge::TokenSeq& s) {
    std::vector<std::string> g;
    for (size_t i = 0; i + n <= s.size(); ++i) {
      std::string key;
      for (size_t k = 0; k < n; ++k) key += s[i + k] + '\x1f';
      g.push_back(key);
    }
    return g;
  };
  auto ga = grams(a), gb = grams(b);
  na = ga.size();
  nb = gb.size();
  std::vector<bool> used(gb.size(), false);
  size_t hits = 0;
  for (const auto& x : ga) {
    for (size_t j = 0; j < gb.size(); ++j) {
      if (!used[j] && gb[j] == x) {
        used[j] = true;
        ++hits;
        break;
      }
    }
  }
  return hits;
}

size_t dp_lcs(const rouge::TokenSeq& a, const rouge::TokenSeq& b) {
  std::vector<std::vector<size_t>> t(a.size() + 1, std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
  return t[a.size()][b.size()];
}

bool ratio_is(double got, size_t num, size_t den) {
  return got == (den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den));
}

Outcome rouge_oracle() {
  Checker c;
  std::mt19937 rng(424242);
  auto start = std::chrono::steady_clock::now();
  const int pairs = 250;
  for (int i = 0; i < pairs; ++i) {
    auto cand = random_seq(rng, 20, 30);
    auto ref = random_seq(rng, 20, 30);
    for (size_t n : {1u, 2u}) {
      size_t nc = 0, nr = 0;
      size_t hits = naive_overlap(cand, ref, n, nc, nr);
      auto s = rouge::rouge_n(cand, ref, static_cast<int>(n));
      bool ok = (nc == 0 || nr == 0) ? (s.precision == 0 && s.recall == 0)
                                     : (ratio_is(s.precision, hits, nc) && ratio_is(s.recall, hits, nr));
      double f = (s.precision + s.recall) > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
      ok = ok && std::abs(s.fmeasure - f) <= 1e-12;
      c.expect(ok, fmt::format("rouge_{} mismatch on pair {}", n, i));
    }
    size_t l = dp_lcs(cand, ref);
    auto s = rouge::rouge_l(cand, ref);
    bool ok = (cand.empty() || ref.empty()) ? s.fmeasure == 0.0
                                            : ratio_is(s.precision, l, cand.size()) && ratio_is(s.recall, l, ref.size());
    c.expect(ok, fmt::format("rouge_l mismatch on pair {}", i));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 5.0, fmt::format("took {:.2f}s", secs));
  return c.outcome(fmt::format("{} pairs, {:.2f}s", pairs, secs));
}

Outcome worked_examples() {
  Checker c;
  auto r1 = rouge::rouge_n(rouge::tokenize("the cat sat"), rouge::tokenize("the cat slept"), 1);
  c.expect(r1.precision == 2.0 / 3.0 && r1.recall == 2.0 / 3.0, "unigram 2/3");
  auto r2 = rouge::rouge_n(rouge::tokenize("the cat sat on the mat"), rouge::tokenize("the cat sat on a mat"), 2);
  c.expect(r2.precision == 0.6 && r2.recall == 0.6, "bigram 0.6");
  auto rl = rouge::rouge_l(rouge::tokenize("the cat sat"), rouge::tokenize("the sat cat"));
  c.expect(rl.precision == 2.0 / 3.0 && rl.recall == 2.0 / 3.0, "lcs 2/3");
  auto ls = rouge::rouge_lsum("the cat ran", "the cat sat\nthe dog ran");
  c.expect(ls.precision == 1.0 && ls.recall == 0.5 && std::abs(ls.fmeasure - 2.0 / 3.0) < 1e-15, "union-LCS");
  return c.outcome("2/3, 0.6, union-LCS P=1.0 R=0.5");
}

Outcome bertscore_reduction() {
  Checker c;
  std::mt19937 rng(99);
  embed::OneHotBackend onehot;
  const int pairs = 250;
  for (int i = 0; i < pairs; ++i) {
    auto a = random_seq(rng, 15, 25);
    auto b = random_seq(rng, 15, 25);
    std::string ta, tb;
    for (const auto& t : a) ta += t + " ";
    for (const auto& t : b) tb += t + " ";
    auto s = embed::bertscore(ta, tb, onehot);
    auto share = [](const rouge::TokenSeq& x, const rouge::TokenSeq& y) {
      if (x.empty() || y.empty()) return 0.0;
      std::set<std::string> types(y.begin(), y.end());
      size_t hits = 0;
      for (const auto& t : x) hits += types.count(t);
      return static_cast<double>(hits) / static_cast<double>(x.size());
    };
    c.expect(s.precision == share(a, b) && s.recall == share(b, a), fmt::format("pair {}", i));
  }
  MockServer server([](const Json&) { return MockReply{500, ""}; });
  embed::HttpEmbeddingBackend fixture("fixture", server.base_url());
  for (const char* text : {"Patient denies chest pain", "TSH 6.2 mIU/L, start levothyroxine"}) {
    c.expect(embed::bertscore(text, text, onehot).f1 == 1.0, "identical under one-hot");
    c.expect(std::abs(embed::bertscore(text, text, fixture).f1 - 1.0) < 1e-12, "identical under http fixture");
  }
  return c.outcome(fmt::format("{} pairs exact; identical texts f1=1", pairs));
}

Outcome published_deltas() {
  Checker c;
  struct Claim {
    double baseline, treatment, stated;
  };
  const Claim claims[] = {{0.346, 0.496, 43.3},  {0.363, 0.653, 79.9}, {3.13, 4.43, 41.5}, {85, 35, -58.8},
                          {33, 5, -84.8},        {107, 21, -80.4},     {71, 1, -98.6},    {0.118, 0.227, 92.7},
                          {0.135, 0.390, 188.5}};
  std::string worst;
  double max_gap = 0;
  for (const auto& cl : claims) {
    auto pct = report::percent_change(cl.baseline, cl.treatment);
    double gap = pct ? std::abs(*pct - cl.stated) : 1e9;
    if (gap > max_gap) {
      max_gap = gap;
      worst = fmt::format("{} vs {}", report::format_percent(pct), cl.stated);
    }
    c.expect(gap <= 0.5, fmt::format("{} -> {} gives {}, stated {}", cl.baseline, cl.treatment,
                                     report::format_percent(pct), cl.stated));
  }
  // Same figures through compare() on published table rows.
  report::AggregateRow base, treat;
  base.dataset = treat.dataset = "ACI Benchmark";
  base.model = "Base_Llama";
  treat.model = "OnDevice";
  base.n = treat.n = 140;
  base.set(report::Field::rouge1, 0.346);
  treat.set(report::Field::rouge1, 0.496);
  base.set(report::Field::hallucination_major, 85);
  treat.set(report::Field::hallucination_major, 35);
  base.set(report::Field::omission_major, 107);
  treat.set(report::Field::omission_major, 21);
  auto cmp = report::compare(base, treat);
  c.expect(report::format_percent(cmp.find(report::Field::hallucination_major)->percent) == "-58.8%", "compare -58.8");
  c.expect(report::format_percent(cmp.find(report::Field::omission_major)->percent) == "-80.4%", "compare -80.4");
  c.expect(std::abs(*cmp.find(report::Field::rouge1)->percent - 43.3) <= 0.5, "compare 43.3");
  return c.outcome(fmt::format("9 stated percentages, max gap {:.2f}pp ({})", max_gap, worst));
}

Outcome safety_counts() {
  Checker c;
  struct Row {
    std::array<int, 3> hall, omis;
    size_t n;
  };
  const Row rows[] = {{{9, 46, 85}, {0, 33, 107}, 140},
                      {{23, 82, 35}, {2, 117, 21}, 140},
                      {{11, 56, 33}, {0, 29, 71}, 100},
                      {{52, 43, 5}, {0, 99, 1}, 100}};
  static constexpr std::string_view names[] = {"No", "Minor", "Major"};
  for (const auto& r : rows) {
    std::vector<std::string_view> h, o;
    for (int k = 0; k < 3; ++k) {
      h.insert(h.end(), r.hall[k], names[k]);
      o.insert(o.end(), r.omis[k], names[k]);
    }
    std::vector<judge::JudgedRecord> judged;
    for (size_t i = 0; i < h.size(); ++i) {
      judged.push_back({fmt::format("r{}", i), "m",
                        judge::parse_judge_response(testing::judge_json(3, 3, 3, 3, 3, 3, 3, true, h[i], o[i])), 0});
    }
    auto agg = report::aggregate({}, judged, "d", "m").row;
    size_t hs = 0, os = 0;
    for (int k = 0; k < 3; ++k) {
      c.expect(agg.safety->hallucination[k] == static_cast<size_t>(r.hall[k]), "hallucination count");
      c.expect(agg.safety->omission[k] == static_cast<size_t>(r.omis[k]), "omission count");
      hs += agg.safety->hallucination[k];
      os += agg.safety->omission[k];
    }
    c.expect(hs == r.n && os == r.n && agg.n == r.n, fmt::format("sums to {}", r.n));
  }
  return c.outcome("4 rows match; sums 140/140/100/100");
}

Outcome judge_round_trip() {
  Checker c;
  ScriptedModels models;
  std::mutex mu;
  std::map<std::string, int> calls;
  // rec-010: malformed once; rec-020: out of range once; rec-030 and rec-040: bad twice.
  MockServer server([&](const Json& body) {
    std::string all = body.dump();
    std::string id;
    for (const char* k : {"Case 10.", "Case 20.", "Case 30.", "Case 40."}) {
      if (contains(all, k)) id = k;
    }
    int n;
    {
      std::lock_guard lock(mu);
      n = ++calls[id.empty() ? "other" : id];
    }
    if (id == "Case 10." && n == 1) return MockReply{200, "Scores: factual 4, completeness 3"};
    if (id == "Case 20." && n == 1) return MockReply{200, testing::judge_json(4, 3, 6, 4, 4, 4, 4, true, "No", "No")};
    if (id == "Case 30.") return MockReply{200, "{\"factual_correctness\": 4}"};
    if (id == "Case 40.") return MockReply{200, testing::judge_json(0, 3, 3, 4, 4, 4, 4, true, "No", "Huge")};
    return models(body);
  });
  TempDir dir;
  judge::JudgeConfig cfg;
  cfg.client.base_url = server.base_url();
  cfg.client.cache_dir = dir / "cache";
  cfg.client.max_retries = 0;
  std::vector<judge::JudgeInput> inputs;
  for (int i = 0; i < 100; ++i) {
    inputs.push_back({fmt::format("rec-{:03}", i), "m", fmt::format("Doctor: Case {}.\nPatient: Tired.", i),
                      fmt::format("## Plan\nCase {}.", i), fmt::format("## Plan\nCase {} plan.", i)});
  }
  llm::ChatClient client(cfg.client);
  auto out = judge::judge_batch(inputs, cfg, PromptTemplate::builtin("judge_default"), client);
  c.expect(out.judged.size() == 98, fmt::format("{} judged", out.judged.size()));
  c.expect(out.failures.size() == 2 && out.failures.count("rec-030") && out.failures.count("rec-040"),
           "permanent failures recorded for rec-030 and rec-040");
  size_t reasked = 0, clean = 0;
  for (const auto& r : out.judged) {
    if (r.id == "rec-010" || r.id == "rec-020") {
      c.expect(r.reask_count == 1, r.id + " reask_count");
      ++reasked;
    } else {
      c.expect(r.reask_count == 0, r.id + " parsed first time");
      ++clean;
    }
  }
  for (const char* k : {"Case 10.", "Case 20.", "Case 30.", "Case 40."}) {
    c.expect(calls[k] == 2, fmt::format("{} made {} calls, expected 2", k, calls[k]));
  }
  return c.outcome(fmt::format("{}/96 well-formed parsed, 2 recovered after one re-ask, 2 permanent errors", clean));
}

// Runs the CLI binary as a child; returns its pid.
pid_t spawn_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv_s = {SCRIBEBENCH_CLI_PATH};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&fa, 2, "/dev/null", O_WRONLY, 0);
  pid_t pid = 0;
  int rc = posix_spawn(&pid, argv[0], &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  if (rc != 0) throw RuntimeFailure("posix_spawn failed");
  return pid;
}

int wait_exit(pid_t pid, int* signal_out = nullptr) {
  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFSIGNALED(status) && signal_out) *signal_out = WTERMSIG(status);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome synthesis_pipeline() {
  Checker c;
  auto schema = note::SectionSchema::default_schema();
  const std::map<std::string, int> failing = {{"Topic 1-5", 2}, {"Topic 1-12", 3}, {"Topic 1-20", 1}};

  // Uninterrupted reference run, in process.
  ScriptedModels ref_models;
  ref_models.critic_failures = failing;
  MockServer ref_server(std::ref(ref_models));
  TempDir ref_dir;
  synth::SynthesisConfig cfg;
  cfg.count = 25;
  cfg.writer.model = cfg.critic.model = cfg.formatter.model = "writer";
  cfg.checkpoint_dir = ref_dir / "ckpt";
  llm::ClientConfig cc;
  cc.base_url = ref_server.base_url();
  cc.cache_dir = ref_dir / "cache";
  llm::ChatClient ref_client(cc);
  auto ref = synth::run_pipeline_to_file(cfg, synth::StagePrompts{}, schema, ref_client, ref_dir / "out.jsonl");
  c.expect(ref.records.size() == 25, fmt::format("{} records", ref.records.size()));
  c.expect(split_lines(read_file(ref_dir / "out.jsonl")).size() >= 25, "25 lines written");
  for (const auto& [title, k] : failing) {
    size_t got = ref_models.revise_calls_by_title[title];
    c.expect(got == static_cast<size_t>(k), fmt::format("{}: {} revise calls, expected {}", title, got, k));
  }
  c.expect(ref_models.revise_calls.load() == 6, "no revise calls for passing records");

  // Killed child process, then resumed.
  ScriptedModels models;
  models.critic_failures = failing;
  MockServer server([&](const Json& body) {
    std::this_thread::sleep_for(std::chrono::milliseconds(4));
    return models(body);
  });
  TempDir dir;
  std::vector<std::string> args = {"--base-url",    server.base_url(),  "--cache-dir", (dir / "cache").string(),
                                   "--max-concurrency", "2",         "synthesize",  "--count",
                                   "25",            "--model",          "writer",      "--out",
                                   (dir / "out.jsonl").string()};
  pid_t pid = spawn_cli(args);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
  while (server.requests() < 45 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  kill(pid, SIGKILL);
  int sig = 0;
  wait_exit(pid, &sig);
  c.expect(sig == SIGKILL, "child was killed mid-run");
  c.expect(!fs::exists(dir / "out.jsonl"), "no output file after the kill");
  size_t done = 0;
  for (size_t i = 0; i < 25; ++i) done += fs::exists(dir / "out.jsonl.checkpoints" / std::to_string(i) / "note.out");
  c.expect(done < 25, fmt::format("{} of 25 records finished before the kill", done));

  int rc = wait_exit(spawn_cli(args));
  c.expect(rc == 0, fmt::format("resume exit code {}", rc));
  c.expect(fs::exists(dir / "out.jsonl") && read_file(dir / "out.jsonl") == read_file(ref_dir / "out.jsonl"),
           "resumed output differs from uninterrupted output");
  return c.outcome(fmt::format("25 records; revise calls 2/3/1 as scripted; killed after {} records, resume "
                               "byte-identical",
                               done));
}

struct CliRun {
  int rc;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int rc = cli::run_cli(args, out, err, [](const std::string&) { return std::optional<std::string>(); });
  return {rc, out.str(), err.str()};
}

Outcome determinism() {
  Checker c;
  ScriptedModels models;
  MockServer server(std::ref(models));
  TempDir dir;
  std::string refs;
  for (int i = 0; i < 6; ++i) {
    refs += jsonl::dump(Json{{"id", fmt::format("case-{}", i)},
                             {"transcript", fmt::format("Doctor: Case {} has fatigue.\nPatient: Two months now.", i)},
                             {"note", fmt::format("## Chief Complaint\nFatigue.\n\n## Plan\nRecheck TSH, case {}.", i)}}) +
            "\n";
  }
  write_file_atomic(dir / "refs.jsonl", refs);
  size_t network = 0;
  auto pipeline = [&](const fs::path& root) {
    fs::create_directories(root);
    std::vector<std::string> g = {"--base-url", server.base_url(), "--cache-dir", (dir / "cache").string(),
                                  "--max-retries", "0", "-q"};
    auto step = [&](std::vector<std::string> a) {
      a.insert(a.begin(), g.begin(), g.end());
      CliRun r = cli(a);
      c.expect(r.rc == 0, fmt::format("{} exited {}: {}", a[g.size()], r.rc, r.err));
      auto p = r.out.find("network calls: ");
      if (p != std::string::npos) network += std::stoul(r.out.substr(p + 15));
    };
    for (std::string arm : {"base", "ondevice"}) {
      std::string cands = (root / (arm + ".cands.jsonl")).string();
      step({"generate", "--dataset", (dir / "refs.jsonl").string(), "--profile", arm, "--model", arm, "--out", cands});
      step({"evaluate", "--references", (dir / "refs.jsonl").string(), "--candidates", cands, "--out",
            (root / (arm + ".scores.jsonl")).string()});
      step({"judge", "--references", (dir / "refs.jsonl").string(), "--candidates", cands, "--out",
            (root / (arm + ".judged.jsonl")).string()});
      step({"report", "--scores", (root / (arm + ".scores.jsonl")).string(), "--judged",
            (root / (arm + ".judged.jsonl")).string(), "--dataset-label", "Fixture", "--out-dir",
            (root / (arm + ".report")).string()});
    }
    step({"compare", "--baseline-dir", (root / "base.report").string(), "--treatment-dir",
          (root / "ondevice.report").string(), "--out-dir", (root / "cmp").string()});
  };
  pipeline(dir / "cold");
  size_t cold_requests = server.requests();
  c.expect(cold_requests > 0 && network == cold_requests, "cold run reports its network calls");
  server.stop();
  network = 0;
  pipeline(dir / "warm");
  c.expect(network == 0 && server.requests() == cold_requests, fmt::format("warm run made {} network calls", network));

  size_t compared = 0, svgs = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "cold")) {
    if (!e.is_regular_file() || contains(e.path().filename().string(), "manifest")) continue;
    fs::path rel = fs::relative(e.path(), dir / "cold");
    bool same = fs::exists(dir / "warm" / rel) && read_file(e.path()) == read_file(dir / "warm" / rel);
    c.expect(same, rel.string() + " differs");
    ++compared;
    svgs += e.path().extension() == ".svg";
  }
  c.expect(svgs >= 2, "charts rendered");
  return c.outcome(fmt::format("{} cold network calls, 0 warm; {} files byte-identical ({} SVG)", cold_requests,
                               compared, svgs));
}

Outcome served_model_reproduction() {
  const char* path = std::getenv("SCRIBEBENCH_ACI_SCORES");
  if (!path || !*path) {
    return {Outcome::skip, "needs a served model; set SCRIBEBENCH_ACI_SCORES to an ACI scores file to check"};
  }
  auto rows = report::load_scores(path);
  auto agg = report::aggregate(rows, {}, "ACI Benchmark", rows.empty() ? "" : rows.front().model).row;
  auto r1 = agg.get(report::Field::rouge1);
  if (!r1) return {Outcome::fail, "scores file has no ROUGE-1"};
  bool ok = std::abs(*r1 - 0.496) <= 0.05;
  return {ok ? Outcome::pass : Outcome::fail, fmt::format("mean ROUGE-1 {:.3f} over {} records (target 0.496 +/- 0.05)",
                                                          *r1, agg.n)};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ROUGE oracle equivalence", rouge_oracle},
      {"Hand-computed metric cases", worked_examples},
      {"BERTScore reduction", bertscore_reduction},
      {"Published-delta reproduction", published_deltas},
      {"Safety-count invariant", safety_counts},
      {"Judge round-trip", judge_round_trip},
      {"Synthesis pipeline", synthesis_pipeline},
      {"Determinism", determinism},
      {"Served-model ROUGE-1 reproduction", served_model_reproduction},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::skip ? "SKIP" : "FAIL";
    failures += o.kind == Outcome::fail;
    std::cout << "[" << tag << "] " << (i + 1) << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
