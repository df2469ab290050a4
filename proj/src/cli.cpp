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

#include "scribebench/cli.hpp"

#include <mutex>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "scribebench/bertscore.hpp"
#include "scribebench/dataset.hpp"
#include "scribebench/errors.hpp"
#include "scribebench/external_scores.hpp"
#include "scribebench/generator.hpp"
#include "scribebench/judge.hpp"
#include "scribebench/report.hpp"
#include "scribebench/response_cache.hpp"
#include "scribebench/scores.hpp"
#include "scribebench/synthesis.hpp"
#include "scribebench/util.hpp"

namespace scribebench::cli {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kManifestName = "run_manifest.json";

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("scribebench");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
  });
}

bool is_secret_flag(std::string_view arg) {
  if (!arg.starts_with("--")) return false;
  std::string name = to_lower_ascii(arg.substr(2, arg.find('=') == std::string_view::npos ? arg.npos : arg.find('=') - 2));
  for (std::string_view s : {"api-key", "apikey", "api_key", "key", "token", "secret", "password", "auth-token"}) {
    if (name == s) return true;
  }
  return false;
}

struct Globals {
  std::string config;
  std::string base_url;
  std::string api_key_env;
  std::string cache_dir;
  std::optional<size_t> max_concurrency;
  std::optional<size_t> requests_per_minute;
  std::optional<double> timeout;
  std::optional<int> max_retries;
  std::string schema;
  std::string prompt_dir;
  bool verbose = false;
  bool quiet = false;
};

// File < environment < flags.
RunConfig resolve_config(const Globals& g, const EnvLookup& env) {
  RunConfig cfg;
  std::string path = g.config;
  if (path.empty()) {
    if (auto p = env(std::string(kConfigEnv))) path = *p;
  }
  if (!path.empty()) cfg = RunConfig::load(path);
  cfg.overrides = overrides_from_env(env);
  ClientOverrides& o = cfg.overrides;
  if (!g.base_url.empty()) o.base_url = g.base_url;
  if (!g.api_key_env.empty()) o.api_key_env = g.api_key_env;
  if (!g.cache_dir.empty()) o.cache_dir = g.cache_dir;
  if (g.max_concurrency) o.max_concurrency = g.max_concurrency;
  if (g.requests_per_minute) o.requests_per_minute = g.requests_per_minute;
  if (g.timeout) o.timeout_seconds = g.timeout;
  if (g.max_retries) o.max_retries = g.max_retries;
  if (!g.schema.empty()) cfg.set_schema_path(g.schema);
  if (!g.prompt_dir.empty()) cfg.prompt_dir = g.prompt_dir;
  return cfg;
}

Json file_entry(const fs::path& p) {
  return {{"path", p.string()}, {"sha256", fs::is_regular_file(p) ? Json(file_sha256_hex(p)) : Json(nullptr)}};
}

void write_manifest(const fs::path& path, std::string_view command, const std::vector<std::string>& args,
                    const RunConfig& cfg, const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    Json extra) {
  Json m;
  m["tool"] = "scribebench";
  m["version"] = SCRIBEBENCH_VERSION;
  m["format_version"] = SCRIBEBENCH_FORMAT_VERSION;
  m["command"] = command;
  m["arguments"] = args;
  m["config"] = cfg.to_json();
  m["config_hash"] = sha256_hex(jsonl::dump(m["config"]));
  Json in = Json::array();
  for (const auto& p : inputs) in.push_back(file_entry(p));
  m["inputs"] = std::move(in);
  Json outj = Json::array();
  for (const auto& p : outputs) outj.push_back(file_entry(p));
  m["outputs"] = std::move(outj);
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_file_atomic(path, m.dump(2) + "\n");
}

fs::path sibling_manifest(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

Json stats_json(const llm::ClientStats& s) {
  return {{"network_calls", s.network_calls},
          {"cache_hits", s.cache_hits},
          {"retries", s.retries},
          {"peak_in_flight", s.peak_in_flight}};
}

void print_stats(std::ostream& out, const llm::ClientStats& s) {
  out << fmt::format("network calls: {}, cache hits: {}, retries: {}\n", s.network_calls, s.cache_hits, s.retries);
}

Json failures_json(const std::map<std::string, std::string>& failures) {
  Json j = Json::object();
  for (const auto& [id, what] : failures) j[id] = what;
  return j;
}

void require_exists(const fs::path& p, std::string_view flag) {
  if (!fs::exists(p)) throw UsageError(fmt::format("{} {}: no such file", flag, p.string()));
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
  return s;
}

// Per-command option storage.
struct SynthesizeOpts {
  size_t count = 0;
  std::string specialty, out, checkpoint_dir, model, writer_model, critic_model, formatter_model;
  std::optional<size_t> pilot;
  std::optional<int> max_revision_iters, pass_threshold;
};
struct GenerateOpts {
  std::string dataset, profile, model, prompt_template, out;
};
struct EvaluateOpts {
  std::string references, candidates, metrics = "rouge,bertscore", backend, endpoint, embedding_model,
      external_scores, external_metric = "bleurt", out;
  bool idf = false;
  bool stemmer = false;
};
struct JudgeOpts {
  std::string references, candidates, transcripts, judge_model, out;
  bool no_transcript = false;
};
struct ReportOpts {
  std::string scores, judged, dataset_label, model_label, out_dir;
};
struct CompareOpts {
  std::string baseline_dir, treatment_dir, out_dir;
};
struct CacheOpts {
  std::string dir;
};

int cmd_synthesize(const SynthesizeOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  synth::SynthesisConfig s = cfg.synthesis_config();
  s.count = o.count;
  s.pilot = o.pilot;
  if (!o.specialty.empty()) s.specialty = o.specialty;
  if (!o.model.empty()) s.writer.model = s.critic.model = s.formatter.model = o.model;
  if (!o.writer_model.empty()) s.writer.model = o.writer_model;
  if (!o.critic_model.empty()) s.critic.model = o.critic_model;
  if (!o.formatter_model.empty()) s.formatter.model = o.formatter_model;
  if (o.max_revision_iters) s.max_revision_iters = *o.max_revision_iters;
  if (o.pass_threshold) s.pass_threshold = *o.pass_threshold;
  if (!o.checkpoint_dir.empty()) s.checkpoint_dir = o.checkpoint_dir;
  if (s.checkpoint_dir.empty()) s.checkpoint_dir = o.out + ".checkpoints";
  s.validate();

  llm::ChatClient client(cfg.client_for(cfg.synthesis));
  synth::StagePrompts prompts = synth::StagePrompts::resolve(cfg.prompt_dir);
  fs::path out_path = o.out;
  ensure_parent(out_path);
  synth::PipelineOutcome outcome = synth::run_pipeline_to_file(s, prompts, cfg.schema(), client, out_path);

  size_t flagged = 0;
  for (const auto& r : outcome.records) flagged += r.critique_passed ? 0 : 1;
  Json extra;
  extra["synthesis"] = s.content_json();
  extra["count"] = s.count;
  extra["pilot"] = s.pilot ? Json(*s.pilot) : Json(nullptr);
  extra["checkpoint_dir"] = s.checkpoint_dir.string();
  extra["records"] = outcome.records.size();
  extra["critique_failed_records"] = flagged;
  extra["stats"] = stats_json(client.stats());
  write_manifest(sibling_manifest(out_path), "synthesize", args, cfg, {}, {out_path}, extra);

  out << fmt::format("wrote {} records to {} ({} flagged critique_passed:false)\n", outcome.records.size(),
                     out_path.string(), flagged);
  if (outcome.stopped_for_pilot) {
    out << fmt::format("pilot stop after {} of {} records; review them, then rerun without --pilot to continue\n",
                       outcome.records.size(), s.count);
  }
  print_stats(out, client.stats());
  return 0;
}

int cmd_generate(const GenerateOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  require_exists(o.dataset, "--dataset");
  auto dataset = data::load_transcripts(o.dataset);
  gen::GenerationProfile profile =
      cfg.profile(o.profile, o.model.empty() ? std::nullopt : std::optional<std::string>(o.model));
  if (!o.prompt_template.empty()) profile.prompt_template_id = o.prompt_template;
  PromptTemplate tmpl = PromptTemplate::resolve(profile.prompt_template_id, cfg.prompt_dir);

  llm::ChatClient client(profile.client);
  fs::path out_path = o.out;
  ensure_parent(out_path);
  gen::BatchOutcome outcome =
      gen::generate_batch_to_file(dataset.records, profile, tmpl, client, cfg.schema(), out_path);

  Json extra;
  extra["profile"] = profile.to_json();
  extra["gen_config_hash"] = profile.config_hash();
  extra["prompt_digest"] = tmpl.digest();
  extra["failures"] = failures_json(outcome.failures);
  extra["warnings"] = dataset.warnings;
  extra["stats"] = stats_json(client.stats());
  write_manifest(sibling_manifest(out_path), "generate", args, cfg, {o.dataset}, {out_path}, extra);

  out << fmt::format("wrote {} candidates to {}\n", outcome.candidates.size(), out_path.string());
  print_stats(out, client.stats());
  if (!outcome.failures.empty()) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : outcome.failures) ids.push_back(id);
    throw RuntimeFailure(fmt::format("{} record(s) failed: {}", ids.size(), join_ids(ids)));
  }
  return 0;
}

int cmd_evaluate(const EvaluateOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  report::EvaluateOptions opts;
  opts.metrics = report::parse_metrics(o.metrics);
  require_exists(o.references, "--references");
  require_exists(o.candidates, "--candidates");

  EmbeddingSettings emb = cfg.embedding;
  if (!o.backend.empty()) emb.backend = o.backend;
  if (!o.endpoint.empty()) emb.endpoint = o.endpoint;
  if (!o.embedding_model.empty()) emb.model = o.embedding_model;

  auto refs = data::load_references(o.references, cfg.schema());
  auto cands = data::load_candidates(o.candidates, cfg.schema());
  llm::ClientConfig client = cfg.client_for(Json::object());

  std::unique_ptr<embed::EmbeddingBackend> backend;
  embed::HttpEmbeddingBackend* http_backend = nullptr;
  if (opts.metrics.contains(report::Metric::bertscore)) {
    embed::EmbeddingBackendRef ref;
    if (emb.backend == "mock_one_hot") {
      ref.kind = embed::BackendKind::mock_one_hot;
    } else if (emb.backend == "http") {
      ref.kind = embed::BackendKind::http_service;
      if (emb.endpoint.empty()) throw UsageError("--embedding-backend http needs --embedding-endpoint");
    } else {
      throw UsageError(fmt::format("unknown embedding backend \"{}\" (known: mock_one_hot, http)", emb.backend));
    }
    ref.model_id = emb.model;
    ref.endpoint = emb.endpoint;
    embed::HttpBackendOptions hopts;
    hopts.timeout_seconds = client.timeout_seconds;
    hopts.max_concurrency = client.max_concurrency;
    hopts.retry = {client.max_retries, client.backoff_base_seconds};
    hopts.cache_dir = emb.cache_dir ? *emb.cache_dir : client.cache_dir / "embeddings";
    backend = embed::make_backend(ref, hopts);
    http_backend = dynamic_cast<embed::HttpEmbeddingBackend*>(backend.get());
    opts.backend = backend.get();
  }

  std::optional<embed::IdfTable> idf;
  if (o.idf) {
    std::vector<std::string> corpus;
    for (const auto& r : refs.records) corpus.push_back(r.reference_note.raw);
    idf = embed::build_idf(corpus);
    opts.idf = &*idf;
  }
  std::optional<embed::ExternalScores> external;
  std::vector<fs::path> inputs = {o.references, o.candidates};
  if (!o.external_scores.empty()) {
    require_exists(o.external_scores, "--external-scores");
    external = embed::ingest_external_scores(o.external_scores, o.external_metric);
    opts.external = &*external;
    inputs.emplace_back(o.external_scores);
  }
  opts.rouge_config.use_stemmer = o.stemmer;
  opts.workers = client.max_concurrency;

  report::EvaluateOutcome result = report::evaluate_pairs(refs.records, cands.records, opts);
  std::string text;
  for (const auto& row : result.rows) text += jsonl::dump(report::to_json(row)) + "\n";
  fs::path out_path = o.out;
  ensure_parent(out_path);
  write_file_atomic(out_path, text);

  std::vector<std::string> warnings = refs.warnings;
  warnings.insert(warnings.end(), cands.warnings.begin(), cands.warnings.end());
  warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  Json extra;
  extra["metrics"] = o.metrics;
  extra["embedding"] = {{"backend", emb.backend}, {"endpoint", emb.endpoint}, {"model", emb.model}};
  extra["idf"] = o.idf;
  extra["rouge_stemmer"] = o.stemmer;
  extra["warnings"] = warnings;
  extra["embedding_network_calls"] = http_backend ? http_backend->network_calls() : 0;
  write_manifest(sibling_manifest(out_path), "evaluate", args, cfg, inputs, {out_path}, extra);

  out << fmt::format("wrote {} score rows to {}\n", result.rows.size(), out_path.string());
  if (http_backend) out << fmt::format("embedding network calls: {}\n", http_backend->network_calls());
  return 0;
}

int cmd_judge(const JudgeOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  require_exists(o.references, "--references");
  require_exists(o.candidates, "--candidates");
  judge::JudgeConfig jc = cfg.judge_config();
  if (!o.judge_model.empty()) jc.judge_model = o.judge_model;
  if (o.no_transcript) jc.include_transcript = false;

  auto refs = data::load_references(o.references, cfg.schema());
  auto cands = data::load_candidates(o.candidates, cfg.schema());
  std::vector<fs::path> inputs = {o.references, o.candidates};
  std::vector<data::TranscriptRecord> transcripts;
  if (!o.transcripts.empty()) {
    require_exists(o.transcripts, "--transcripts");
    transcripts = data::load_transcripts(o.transcripts).records;
    inputs.emplace_back(o.transcripts);
  }
  auto inputs_joined = judge::join_inputs(refs.records, cands.records, transcripts, jc.include_transcript);
  PromptTemplate tmpl = PromptTemplate::resolve(jc.prompt_template_id, cfg.prompt_dir);

  llm::ChatClient client(jc.client);
  judge::JudgeBatchOutcome outcome = judge::judge_batch(inputs_joined, jc, tmpl, client);
  std::string text;
  for (const auto& r : outcome.judged) text += jsonl::dump(judge::to_json(r)) + "\n";
  fs::path out_path = o.out;
  ensure_parent(out_path);
  write_file_atomic(out_path, text);

  Json extra;
  extra["judge"] = jc.to_json();
  extra["prompt_digest"] = tmpl.digest();
  extra["failures"] = failures_json(outcome.failures);
  extra["stats"] = stats_json(client.stats());
  write_manifest(sibling_manifest(out_path), "judge", args, cfg, inputs, {out_path}, extra);

  out << fmt::format("wrote {} assessments to {}\n", outcome.judged.size(), out_path.string());
  print_stats(out, client.stats());
  if (!outcome.failures.empty()) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : outcome.failures) ids.push_back(id);
    throw RuntimeFailure(fmt::format("{} record(s) could not be judged: {}", ids.size(), join_ids(ids)));
  }
  return 0;
}

std::string infer_model(const std::vector<report::ScoreRow>& scores, const std::vector<judge::JudgedRecord>& judged) {
  std::set<std::string> models;
  for (const auto& s : scores) models.insert(s.model);
  for (const auto& j : judged) models.insert(j.model);
  if (models.size() != 1) {
    throw ValidationError(fmt::format("inputs hold {} model labels; pass --model-label", models.size()));
  }
  return *models.begin();
}

void write_tables(const fs::path& dir, const std::vector<report::AggregateRow>& rows, std::vector<fs::path>& outputs) {
  for (auto [name, fmt_kind] : {std::pair{"tables.md", report::TableFormat::markdown},
                                std::pair{"tables.csv", report::TableFormat::csv},
                                std::pair{"tables.jsonl", report::TableFormat::jsonl}}) {
    fs::path p = dir / name;
    write_file_atomic(p, report::render_tables(rows, fmt_kind));
    outputs.push_back(p);
  }
}

int cmd_report(const ReportOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  if (o.scores.empty() && o.judged.empty()) throw UsageError("report needs --scores, --judged or both");
  std::vector<report::ScoreRow> scores;
  std::vector<judge::JudgedRecord> judged;
  std::vector<fs::path> inputs;
  if (!o.scores.empty()) {
    require_exists(o.scores, "--scores");
    scores = report::load_scores(o.scores);
    inputs.emplace_back(o.scores);
  }
  if (!o.judged.empty()) {
    require_exists(o.judged, "--judged");
    judged = judge::load_judged(o.judged);
    inputs.emplace_back(o.judged);
  }
  std::string model = o.model_label.empty() ? infer_model(scores, judged) : o.model_label;
  report::AggregateResult agg = report::aggregate(scores, judged, o.dataset_label, model);
  if (!agg.orphan_ids.empty()) {
    throw ValidationError(fmt::format("scores and judged files cover different ids; orphans: {}",
                                      join_ids(agg.orphan_ids)));
  }

  fs::path dir = o.out_dir;
  fs::create_directories(dir);
  std::vector<fs::path> outputs;
  write_tables(dir, {agg.row}, outputs);
  fs::path agg_path = dir / "aggregate.json";
  write_file_atomic(agg_path, report::to_json(agg.row).dump(2) + "\n");
  outputs.push_back(agg_path);
  write_manifest(dir / kManifestName, "report", args, cfg, inputs, outputs,
                 Json{{"dataset", o.dataset_label}, {"model", model}, {"n", agg.row.n}});
  out << fmt::format("wrote report for {} / {} (n={}) to {}\n", o.dataset_label, model, agg.row.n, dir.string());
  return 0;
}

report::AggregateRow load_aggregate(const fs::path& dir, std::string_view flag) {
  fs::path p = dir / "aggregate.json";
  require_exists(p, flag);
  Json j = Json::parse(read_file(p), nullptr, false);
  if (j.is_discarded()) throw ValidationError(fmt::format("{}: not valid JSON", p.string()));
  return report::aggregate_from_json(j, p.string());
}

int cmd_compare(const CompareOpts& o, RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  report::AggregateRow base = load_aggregate(o.baseline_dir, "--baseline-dir");
  report::AggregateRow treat = load_aggregate(o.treatment_dir, "--treatment-dir");
  report::ComparisonReport cmp = report::compare(base, treat);

  fs::path dir = o.out_dir;
  fs::create_directories(dir / "charts");
  std::vector<fs::path> outputs;
  write_file_atomic(dir / "comparison.md", report::render_comparison_markdown(cmp));
  outputs.push_back(dir / "comparison.md");
  write_file_atomic(dir / "comparison.json", report::comparison_to_json(cmp).dump(2) + "\n");
  outputs.push_back(dir / "comparison.json");
  write_tables(dir, {base, treat}, outputs);

  size_t charts = 0;
  for (auto group : {report::ChartGroup::text_similarity, report::ChartGroup::clinical_quality,
                     report::ChartGroup::hallucination, report::ChartGroup::omission}) {
    fs::path p = dir / "charts" / (std::string(report::to_string(group)) + ".svg");
    try {
      write_file_atomic(p, report::render_chart(cmp, group));
    } catch (const ValidationError& e) {
      spdlog::info("skipping chart: {}", e.what());
      continue;
    }
    outputs.push_back(p);
    ++charts;
  }
  write_manifest(dir / kManifestName, "compare", args, cfg,
                 {fs::path(o.baseline_dir) / "aggregate.json", fs::path(o.treatment_dir) / "aggregate.json"}, outputs,
                 Json::object());
  out << fmt::format("wrote comparison of {} vs {} on {} ({} charts) to {}\n", base.model, treat.model, cmp.dataset,
                     charts, dir.string());
  return 0;
}

int cmd_cache_clear(const CacheOpts& o, RunConfig& cfg, std::ostream& out) {
  fs::path dir = o.dir.empty() ? cfg.client_for(Json::object()).cache_dir : fs::path(o.dir);
  size_t removed = ResponseCache::clear(dir);
  out << fmt::format("removed {} cache entries from {}\n", removed, dir.string());
  return 0;
}

}  // namespace

std::string version_string() {
  return fmt::format("scribebench {} (format {})", SCRIBEBENCH_VERSION, SCRIBEBENCH_FORMAT_VERSION);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  init_logging();
  CLI::App app{"Structured clinical note generation and evaluation toolkit", "scribebench"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Config file (JSON); defaults to $SCRIBEBENCH_CONFIG");
  app.add_option("--base-url", g.base_url, "Chat-completions endpoint base URL");
  app.add_option("--api-key-env", g.api_key_env, "Name of the environment variable holding the API key");
  app.add_option("--cache-dir", g.cache_dir, "Response cache directory");
  app.add_option("--max-concurrency", g.max_concurrency, "Maximum in-flight requests")->check(CLI::PositiveNumber);
  app.add_option("--requests-per-minute", g.requests_per_minute, "Request rate limit (0: unlimited)");
  app.add_option("--timeout", g.timeout, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
  app.add_option("--max-retries", g.max_retries, "Retries for timeouts, 429 and 5xx")->check(CLI::NonNegativeNumber);
  app.add_option("--schema", g.schema, "Section schema file (JSON)");
  app.add_option("--prompt-dir", g.prompt_dir, "Directory of prompt template overrides");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");
  app.add_flag("-q,--quiet", g.quiet, "Warnings and errors only");

  SynthesizeOpts so;
  auto* syn = app.add_subcommand("synthesize", "Build a synthetic transcript + note dataset");
  syn->add_option("--count", so.count, "Number of records")->required()->check(CLI::PositiveNumber);
  syn->add_option("--specialty", so.specialty, "Clinical specialty (default endocrinology)");
  syn->add_option("--pilot", so.pilot, "Stop after this many records for review")->check(CLI::PositiveNumber);
  syn->add_option("--out", so.out, "Output dataset file")->required();
  syn->add_option("--checkpoint-dir", so.checkpoint_dir, "Checkpoint directory (default <out>.checkpoints)");
  syn->add_option("--model", so.model, "Model for every stage");
  syn->add_option("--writer-model", so.writer_model, "Model for topics, contexts, transcripts and revisions");
  syn->add_option("--critic-model", so.critic_model, "Model for critiques");
  syn->add_option("--formatter-model", so.formatter_model, "Model for note transformation");
  syn->add_option("--max-revision-iters", so.max_revision_iters, "Revision budget per record");
  syn->add_option("--pass-threshold", so.pass_threshold, "Minimum critique score on every criterion");

  GenerateOpts go;
  auto* gen = app.add_subcommand("generate", "Generate candidate notes from transcripts");
  gen->add_option("--dataset", go.dataset, "Transcripts file")->required();
  gen->add_option("--profile", go.profile, "Generation profile id")->required();
  gen->add_option("--model", go.model, "Model name (defines or overrides the profile's model)");
  gen->add_option("--prompt-template", go.prompt_template, "Prompt template id");
  gen->add_option("--out", go.out, "Candidates file")->required();

  EvaluateOpts eo;
  auto* eva = app.add_subcommand("evaluate", "Score candidates against references");
  eva->add_option("--references", eo.references, "References file")->required();
  eva->add_option("--candidates", eo.candidates, "Candidates file")->required();
  eva->add_option("--metrics", eo.metrics, "Comma-separated: rouge,bertscore");
  eva->add_option("--embedding-backend", eo.backend, "mock_one_hot or http");
  eva->add_option("--embedding-endpoint", eo.endpoint, "Token-embedding service base URL");
  eva->add_option("--embedding-model", eo.embedding_model, "Embedding model id");
  eva->add_option("--external-scores", eo.external_scores, "Externally computed scores file (e.g. BLEURT)");
  eva->add_option("--external-metric", eo.external_metric, "Metric name to read from --external-scores");
  eva->add_flag("--idf", eo.idf, "IDF-weight BERTScore using the references as corpus");
  eva->add_flag("--stemmer", eo.stemmer, "Porter-stem tokens for ROUGE");
  eva->add_option("--out", eo.out, "Scores file")->required();

  JudgeOpts jo;
  auto* jud = app.add_subcommand("judge", "Rate candidates with an LLM judge");
  jud->add_option("--references", jo.references, "References file")->required();
  jud->add_option("--candidates", jo.candidates, "Candidates file")->required();
  jud->add_option("--transcripts", jo.transcripts, "Transcripts file (else transcripts bundled with references)");
  jud->add_option("--judge-model", jo.judge_model, "Judge model");
  jud->add_flag("--no-transcript", jo.no_transcript, "Ground the judge in the reference note only");
  jud->add_option("--out", jo.out, "Judged file")->required();

  ReportOpts ro;
  auto* rep = app.add_subcommand("report", "Aggregate scores and judgments into tables");
  rep->add_option("--scores", ro.scores, "Scores file");
  rep->add_option("--judged", ro.judged, "Judged file");
  rep->add_option("--dataset-label", ro.dataset_label, "Dataset label")->required();
  rep->add_option("--model-label", ro.model_label, "Model label (default: the inputs' model)");
  rep->add_option("--out-dir", ro.out_dir, "Report directory")->required();

  CompareOpts co;
  auto* cmp = app.add_subcommand("compare", "Compare two report directories");
  cmp->add_option("--baseline-dir", co.baseline_dir, "Baseline report directory")->required();
  cmp->add_option("--treatment-dir", co.treatment_dir, "Treatment report directory")->required();
  cmp->add_option("--out-dir", co.out_dir, "Comparison directory")->required();

  CacheOpts cao;
  auto* cache = app.add_subcommand("cache", "Response cache maintenance");
  cache->require_subcommand(1);
  auto* clear = cache->add_subcommand("clear", "Delete every cached response");
  clear->add_option("--dir", cao.dir, "Cache directory (default: resolved cache_dir)");

  CLI::App* active = &app;
  try {
    for (const auto& a : args) {
      if (is_secret_flag(a)) {
        throw UsageError(fmt::format("{} is not accepted: secrets are read only from the environment variable named "
                                     "by --api-key-env or the config's api_key_env",
                                     a.substr(0, a.find('='))));
      }
    }
    std::vector<std::string> argv_store = {"scribebench"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      int rc = app.exit(e, out, err);
      return rc == 0 ? 0 : 1;
    }
    for (auto* sub : app.get_subcommands()) active = sub;

    spdlog::set_level(g.verbose ? spdlog::level::debug : g.quiet ? spdlog::level::warn : spdlog::level::info);
    RunConfig cfg = resolve_config(g, env);

    if (syn->parsed()) return cmd_synthesize(so, cfg, args, out);
    if (gen->parsed()) return cmd_generate(go, cfg, args, out);
    if (eva->parsed()) return cmd_evaluate(eo, cfg, args, out);
    if (jud->parsed()) return cmd_judge(jo, cfg, args, out);
    if (rep->parsed()) return cmd_report(ro, cfg, args, out);
    if (cmp->parsed()) return cmd_compare(co, cfg, args, out);
    if (clear->parsed()) return cmd_cache_clear(cao, cfg, out);
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 1;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const RuntimeFailure& e) {
    err << "failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace scribebench::cli
