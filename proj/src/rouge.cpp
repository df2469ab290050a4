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

#include "scribebench/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "scribebench/porter_stemmer.hpp"

namespace scribebench::rouge {
namespace {

using NGram = std::vector<std::string_view>;

struct NGramHash {
  size_t operator()(const NGram& g) const noexcept {
    size_t h = 0xcbf29ce484222325ULL;
    for (auto tok : g) {
      h ^= std::hash<std::string_view>{}(tok) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

using NGramCounts = std::unordered_map<NGram, size_t, NGramHash>;

NGramCounts count_ngrams(const TokenSeq& tokens, size_t n, size_t& total) {
  NGramCounts counts;
  total = tokens.size() >= n ? tokens.size() - n + 1 : 0;
  for (size_t i = 0; i < total; ++i) {
    NGram g(tokens.begin() + static_cast<std::ptrdiff_t>(i),
            tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[std::move(g)];
  }
  return counts;
}

bool is_token_char(char c) {
  auto uc = static_cast<unsigned char>(c);
  return uc < 0x80 && std::isalnum(uc);
}

// Indices into `ref` of one LCS with `cand`, using the same backtracking
// tie-break as the widely used Python rouge-score package.
std::vector<size_t> lcs_indices(const TokenSeq& ref, const TokenSeq& cand) {
  const size_t rows = ref.size();
  const size_t cols = cand.size();
  std::vector<size_t> table((rows + 1) * (cols + 1), 0);
  auto at = [&](size_t i, size_t j) -> size_t& { return table[i * (cols + 1) + j]; };
  for (size_t i = 1; i <= rows; ++i) {
    for (size_t j = 1; j <= cols; ++j) {
      at(i, j) = ref[i - 1] == cand[j - 1] ? at(i - 1, j - 1) + 1 : std::max(at(i - 1, j), at(i, j - 1));
    }
  }
  std::vector<size_t> picked;
  size_t i = rows;
  size_t j = cols;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      picked.push_back(i - 1);
      --i;
      --j;
    } else if (at(i, j - 1) > at(i - 1, j)) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(picked.begin(), picked.end());
  return picked;
}

}  // namespace

double harmonic_mean(double precision, double recall) {
  double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

RougeScore make_score(double hits, size_t candidate_total, size_t reference_total) {
  if (candidate_total == 0 || reference_total == 0) return {};
  RougeScore s;
  s.precision = hits / static_cast<double>(candidate_total);
  s.recall = hits / static_cast<double>(reference_total);
  s.fmeasure = harmonic_mean(s.precision, s.recall);
  return s;
}

TokenSeq tokenize(std::string_view text, const RougeConfig& config) {
  TokenSeq tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    tokens.push_back(config.use_stemmer ? porter_stem(current) : current);
    current.clear();
  };
  for (char c : text) {
    if (is_token_char(c)) {
      current.push_back(config.lowercase ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  size_t cand_total = 0;
  size_t ref_total = 0;
  NGramCounts cand = count_ngrams(candidate, static_cast<size_t>(n), cand_total);
  NGramCounts ref = count_ngrams(reference, static_cast<size_t>(n), ref_total);
  size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  return make_score(static_cast<double>(overlap), cand_total, ref_total);
}

size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  const TokenSeq& longer = a.size() >= b.size() ? a : b;
  const TokenSeq& shorter = a.size() >= b.size() ? b : a;
  std::vector<size_t> prev(shorter.size() + 1, 0);
  std::vector<size_t> cur(shorter.size() + 1, 0);
  for (const auto& x : longer) {
    for (size_t j = 1; j <= shorter.size(); ++j) {
      cur[j] = x == shorter[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[shorter.size()];
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  return make_score(static_cast<double>(lcs_length(candidate, reference)), candidate.size(),
                    reference.size());
}

std::vector<std::string> split_sentences(std::string_view text, SentenceSplit mode) {
  std::vector<std::string> sentences;
  std::string current;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      sentences.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(c);
    if (mode == SentenceSplit::newline_or_period && c == '.' && i + 1 < text.size() &&
        std::isspace(static_cast<unsigned char>(text[i + 1]))) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  sentences.push_back(std::move(current));
  return sentences;
}

RougeScore rouge_lsum(const std::vector<TokenSeq>& candidate_sentences,
                      const std::vector<TokenSeq>& reference_sentences) {
  size_t cand_total = 0;
  size_t ref_total = 0;
  std::unordered_map<std::string, size_t> cand_budget;
  std::unordered_map<std::string, size_t> ref_budget;
  for (const auto& s : candidate_sentences) {
    cand_total += s.size();
    for (const auto& t : s) ++cand_budget[t];
  }
  for (const auto& s : reference_sentences) {
    ref_total += s.size();
    for (const auto& t : s) ++ref_budget[t];
  }
  if (cand_total == 0 || ref_total == 0) return {};

  size_t hits = 0;
  for (const auto& ref : reference_sentences) {
    std::set<size_t> union_positions;
    for (const auto& cand : candidate_sentences) {
      for (size_t idx : lcs_indices(ref, cand)) union_positions.insert(idx);
    }
    for (size_t idx : union_positions) {
      const std::string& tok = ref[idx];
      auto c = cand_budget.find(tok);
      auto r = ref_budget.find(tok);
      if (c != cand_budget.end() && r != ref_budget.end() && c->second > 0 && r->second > 0) {
        ++hits;
        --c->second;
        --r->second;
      }
    }
  }
  return make_score(static_cast<double>(hits), cand_total, ref_total);
}

RougeScore rouge_lsum(std::string_view candidate, std::string_view reference,
                      const RougeConfig& config) {
  auto tokenize_sentences = [&](std::string_view text) {
    std::vector<TokenSeq> out;
    for (const auto& s : split_sentences(text, config.sentence_split)) {
      TokenSeq toks = tokenize(s, config);
      if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
  };
  return rouge_lsum(tokenize_sentences(candidate), tokenize_sentences(reference));
}

RougeSuite rouge_suite(std::string_view candidate, std::string_view reference,
                       const RougeConfig& config) {
  TokenSeq cand = tokenize(candidate, config);
  TokenSeq ref = tokenize(reference, config);
  RougeSuite suite;
  suite.rouge1 = rouge_n(cand, ref, 1);
  suite.rouge2 = rouge_n(cand, ref, 2);
  suite.rougeL = rouge_l(cand, ref);
  suite.rougeLsum = rouge_lsum(candidate, reference, config);
  return suite;
}

}  // namespace scribebench::rouge
