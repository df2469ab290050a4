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

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scribebench/concurrency.hpp"
#include "scribebench/http.hpp"
#include "scribebench/response_cache.hpp"

namespace scribebench::embed {

struct TokenEmbeddings {
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vectors;
  size_t dim = 0;

  /// Throws ValidationError unless tokens and vectors align and every
  /// vector has length dim.
  void validate() const;
};

enum class BackendKind { mock_one_hot, http_service };

struct EmbeddingBackendRef {
  BackendKind kind = BackendKind::mock_one_hot;
  std::string model_id;
  std::string endpoint;  // http_service only
};

struct BertScoreResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct IdfTable {
  std::unordered_map<std::string, double> weights;
  double default_weight = 1.0;

  double weight(const std::string& token) const;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual TokenEmbeddings embed(std::string_view text) = 0;
  /// Embeds a (candidate, reference) pair. Backends whose vector space
  /// depends on the pair (the one-hot mock) override this.
  virtual std::pair<TokenEmbeddings, TokenEmbeddings> embed_pair(std::string_view candidate,
                                                                 std::string_view reference);
};

/// Test backend: rouge-tokenizes the text and gives every distinct token
/// type its own standard basis vector, in order of first appearance. For a
/// pair the vocabulary spans both texts, candidate first.
class OneHotBackend final : public EmbeddingBackend {
 public:
  TokenEmbeddings embed(std::string_view text) override;
  std::pair<TokenEmbeddings, TokenEmbeddings> embed_pair(std::string_view candidate,
                                                         std::string_view reference) override;
};

struct HttpBackendOptions {
  double timeout_seconds = 60.0;
  size_t max_concurrency = 4;
  http::RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;  // persistent cache when set
};

/// POST {endpoint}/v1/token_embeddings {"model","text"} ->
/// {"tokens": [...], "embeddings": [[...], ...]}. Responses are cached in
/// memory (and on disk when cache_dir is set) keyed by (model, text hash).
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  HttpEmbeddingBackend(std::string model_id, std::string endpoint, HttpBackendOptions options = {});

  TokenEmbeddings embed(std::string_view text) override;
  size_t network_calls() const { return network_calls_.load(); }

 private:
  std::string key_for(std::string_view text) const;

  std::string model_id_;
  http::Endpoint endpoint_;
  HttpBackendOptions options_;
  Semaphore in_flight_;
  std::optional<ResponseCache> disk_;
  std::mutex mu_;
  std::unordered_map<std::string, TokenEmbeddings> memory_;
  std::atomic<size_t> network_calls_{0};
};

std::unique_ptr<EmbeddingBackend> make_backend(const EmbeddingBackendRef& ref,
                                               HttpBackendOptions options = {});

/// Parses a token-embedding response body.
TokenEmbeddings parse_embedding_response(const std::string& body);

/// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero and
/// exactly 1 for identical non-zero vectors.
double cosine(std::span<const double> a, std::span<const double> b);

/// Greedy max-cosine matching. Empty candidate or reference gives all
/// zeros; throws ValidationError on dimension mismatch.
BertScoreResult greedy_match(const TokenEmbeddings& candidate, const TokenEmbeddings& reference,
                             const IdfTable* idf = nullptr);

BertScoreResult bertscore(std::string_view candidate, std::string_view reference,
                          EmbeddingBackend& backend, const IdfTable* idf = nullptr);

/// idf(t) = ln((N+1)/(df(t)+1)); unseen tokens weigh ln(N+1). Throws
/// UsageError for an empty corpus.
IdfTable build_idf(const std::vector<std::string>& reference_corpus);

}  // namespace scribebench::embed
