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

#include "scribebench/bertscore.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "scribebench/errors.hpp"
#include "scribebench/jsonl.hpp"
#include "scribebench/rouge.hpp"
#include "scribebench/util.hpp"

namespace scribebench::embed {
namespace {

TokenEmbeddings one_hot(const rouge::TokenSeq& tokens,
                        const std::unordered_map<std::string, size_t>& vocab) {
  TokenEmbeddings out;
  out.dim = vocab.size();
  out.tokens = tokens;
  out.vectors.reserve(tokens.size());
  for (const auto& t : tokens) {
    std::vector<double> v(out.dim, 0.0);
    v[vocab.at(t)] = 1.0;
    out.vectors.push_back(std::move(v));
  }
  return out;
}

void add_to_vocab(const rouge::TokenSeq& tokens, std::unordered_map<std::string, size_t>& vocab) {
  for (const auto& t : tokens) vocab.emplace(t, vocab.size());
}

// Weighted mean over `side` of each token's best cosine against `other`.
double directed_score(const TokenEmbeddings& side, const TokenEmbeddings& other, const IdfTable* idf) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (size_t i = 0; i < side.tokens.size(); ++i) {
    double best = -1.0;
    for (const auto& v : other.vectors) best = std::max(best, cosine(side.vectors[i], v));
    double w = idf ? idf->weight(side.tokens[i]) : 1.0;
    numerator += w * best;
    denominator += w;
  }
  return denominator > 0.0 ? numerator / denominator : 0.0;
}

}  // namespace

void TokenEmbeddings::validate() const {
  if (tokens.size() != vectors.size()) {
    throw ValidationError(fmt::format("token embeddings: {} tokens but {} vectors", tokens.size(),
                                      vectors.size()));
  }
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw ValidationError(fmt::format("token embeddings: vector {} has dimension {}, expected {}",
                                        i, vectors[i].size(), dim));
    }
  }
}

double IdfTable::weight(const std::string& token) const {
  auto it = weights.find(token);
  return it == weights.end() ? default_weight : it->second;
}

std::pair<TokenEmbeddings, TokenEmbeddings> EmbeddingBackend::embed_pair(std::string_view candidate,
                                                                         std::string_view reference) {
  return {embed(candidate), embed(reference)};
}

TokenEmbeddings OneHotBackend::embed(std::string_view text) {
  rouge::TokenSeq tokens = rouge::tokenize(text);
  std::unordered_map<std::string, size_t> vocab;
  add_to_vocab(tokens, vocab);
  return one_hot(tokens, vocab);
}

std::pair<TokenEmbeddings, TokenEmbeddings> OneHotBackend::embed_pair(std::string_view candidate,
                                                                      std::string_view reference) {
  rouge::TokenSeq cand = rouge::tokenize(candidate);
  rouge::TokenSeq ref = rouge::tokenize(reference);
  std::unordered_map<std::string, size_t> vocab;
  add_to_vocab(cand, vocab);
  add_to_vocab(ref, vocab);
  return {one_hot(cand, vocab), one_hot(ref, vocab)};
}

HttpEmbeddingBackend::HttpEmbeddingBackend(std::string model_id, std::string endpoint,
                                           HttpBackendOptions options)
    : model_id_(std::move(model_id)),
      endpoint_(http::parse_base_url(endpoint)),
      options_(std::move(options)),
      in_flight_(options_.max_concurrency) {
  if (options_.cache_dir) disk_.emplace(*options_.cache_dir);
}

std::string HttpEmbeddingBackend::key_for(std::string_view text) const {
  return sha256_hex(fmt::format("token_embeddings\n{}\n{}", model_id_, sha256_hex(text)));
}

TokenEmbeddings HttpEmbeddingBackend::embed(std::string_view text) {
  const std::string key = key_for(text);
  {
    std::lock_guard lock(mu_);
    if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  }
  if (disk_) {
    if (auto body = disk_->get(key)) {
      TokenEmbeddings emb = parse_embedding_response(*body);
      std::lock_guard lock(mu_);
      return memory_.emplace(key, std::move(emb)).first->second;
    }
  }

  Semaphore::Guard slot(in_flight_);
  Json req;
  req["model"] = model_id_;
  req["text"] = std::string(text);
  const std::string body = jsonl::dump(req);
  http::Response res = http::with_retries(
      options_.retry,
      [&] {
        ++network_calls_;
        return http::post_json(endpoint_, "/v1/token_embeddings", body, {}, options_.timeout_seconds);
      },
      {});
  if (res.transport_failed()) {
    throw RuntimeFailure(fmt::format("token embedding request failed: {}", res.error));
  }
  if (res.status < 200 || res.status >= 300) {
    throw RuntimeFailure(fmt::format("token embedding request returned HTTP {}", res.status));
  }
  TokenEmbeddings emb = parse_embedding_response(res.body);
  if (disk_) disk_->put(key, res.body);
  std::lock_guard lock(mu_);
  return memory_.emplace(key, std::move(emb)).first->second;
}

std::unique_ptr<EmbeddingBackend> make_backend(const EmbeddingBackendRef& ref,
                                               HttpBackendOptions options) {
  switch (ref.kind) {
    case BackendKind::mock_one_hot: return std::make_unique<OneHotBackend>();
    case BackendKind::http_service:
      if (ref.endpoint.empty()) throw UsageError("http_service embedding backend needs an endpoint");
      return std::make_unique<HttpEmbeddingBackend>(ref.model_id, ref.endpoint, std::move(options));
  }
  throw UsageError("unknown embedding backend");
}

TokenEmbeddings parse_embedding_response(const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("tokens") || !j.contains("embeddings") ||
      !j["tokens"].is_array() || !j["embeddings"].is_array()) {
    throw RuntimeFailure("malformed token embedding response");
  }
  TokenEmbeddings out;
  try {
    out.tokens = j["tokens"].get<std::vector<std::string>>();
    out.vectors = j["embeddings"].get<std::vector<std::vector<double>>>();
  } catch (const Json::exception& e) {
    throw RuntimeFailure(fmt::format("malformed token embedding response: {}", e.what()));
  }
  out.dim = out.vectors.empty() ? 0 : out.vectors.front().size();
  out.validate();
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  bool identical = true;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
    identical = identical && a[i] == b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  if (identical) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

BertScoreResult greedy_match(const TokenEmbeddings& candidate, const TokenEmbeddings& reference,
                             const IdfTable* idf) {
  candidate.validate();
  reference.validate();
  if (candidate.tokens.empty() || reference.tokens.empty()) return {};
  if (candidate.dim != reference.dim) {
    throw ValidationError(fmt::format("greedy_match: candidate dimension {} != reference dimension {}",
                                      candidate.dim, reference.dim));
  }
  BertScoreResult r;
  r.precision = directed_score(candidate, reference, idf);
  r.recall = directed_score(reference, candidate, idf);
  r.f1 = (r.precision > 0.0 && r.recall > 0.0) ? rouge::harmonic_mean(r.precision, r.recall) : 0.0;
  return r;
}

BertScoreResult bertscore(std::string_view candidate, std::string_view reference,
                          EmbeddingBackend& backend, const IdfTable* idf) {
  auto [cand, ref] = backend.embed_pair(candidate, reference);
  return greedy_match(cand, ref, idf);
}

IdfTable build_idf(const std::vector<std::string>& reference_corpus) {
  if (reference_corpus.empty()) throw UsageError("build_idf: corpus is empty");
  std::unordered_map<std::string, size_t> df;
  for (const auto& doc : reference_corpus) {
    rouge::TokenSeq tokens = rouge::tokenize(doc);
    std::unordered_set<std::string> seen(tokens.begin(), tokens.end());
    for (const auto& t : seen) ++df[t];
  }
  const double n = static_cast<double>(reference_corpus.size());
  IdfTable table;
  table.default_weight = std::log(n + 1.0);
  for (const auto& [token, count] : df) {
    table.weights.emplace(token, std::log((n + 1.0) / (static_cast<double>(count) + 1.0)));
  }
  return table;
}

}  // namespace scribebench::embed
