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

#include <string>
#include <string_view>
#include <vector>

namespace scribebench::rouge {

using TokenSeq = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double fmeasure = 0.0;
};

/// Harmonic mean, 0 when precision + recall == 0.
double harmonic_mean(double precision, double recall);

/// Score from a hit count and the two side totals; an empty side scores 0.
RougeScore make_score(double hits, size_t candidate_total, size_t reference_total);

enum class SentenceSplit { newline, newline_or_period };

struct RougeConfig {
  bool lowercase = true;
  bool use_stemmer = false;
  SentenceSplit sentence_split = SentenceSplit::newline_or_period;
};

/// Splits on maximal runs of characters outside [A-Za-z0-9]. Bytes outside
/// ASCII are separators, so non-ASCII words never produce tokens.
TokenSeq tokenize(std::string_view text, const RougeConfig& config = {});

/// Clipped n-gram overlap. Throws std::invalid_argument when n < 1.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

/// Sentence texts per the configured split rule, before tokenization.
std::vector<std::string> split_sentences(std::string_view text, SentenceSplit mode);

/// Summary-level LCS over pre-tokenized sentences.
RougeScore rouge_lsum(const std::vector<TokenSeq>& candidate_sentences,
                      const std::vector<TokenSeq>& reference_sentences);
RougeScore rouge_lsum(std::string_view candidate, std::string_view reference,
                      const RougeConfig& config = {});

struct RougeSuite {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  RougeScore rougeLsum;
};

RougeSuite rouge_suite(std::string_view candidate, std::string_view reference,
                       const RougeConfig& config = {});

}  // namespace scribebench::rouge
