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

#include "scribebench/porter_stemmer.hpp"

#include <array>
#include <utility>

namespace scribebench::rouge {
namespace {

// All predicates look at the prefix w[0, len).

bool is_consonant(const std::string& w, size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 || !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in [C](VC)^m[V].
int measure(const std::string& w, size_t len) {
  size_t i = 0;
  int m = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (true) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i >= len) return m;
    while (i < len && is_consonant(w, i)) ++i;
    ++m;
    if (i >= len) return m;
  }
}

bool has_vowel(const std::string& w, size_t len) {
  for (size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool double_consonant(const std::string& w, size_t len) {
  return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// consonant-vowel-consonant, last not w, x or y
bool cvc(const std::string& w, size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) {
    return false;
  }
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

void replace_suffix(std::string& w, size_t suffix_len, std::string_view with) {
  w.resize(w.size() - suffix_len);
  w.append(with);
}

using Rule = std::pair<std::string_view, std::string_view>;

// Picks the longest listed suffix the word ends with. If the stem before it
// has measure > min_measure the suffix is rewritten; either way no shorter
// rule is tried.
template <size_t N>
void apply_longest(std::string& w, const std::array<Rule, N>& rules, int min_measure) {
  const Rule* best = nullptr;
  for (const auto& rule : rules) {
    if (ends_with(w, rule.first) && (!best || rule.first.size() > best->first.size())) {
      best = &rule;
    }
  }
  if (best && measure(w, w.size() - best->first.size()) > min_measure) {
    replace_suffix(w, best->first.size(), best->second);
  }
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    replace_suffix(w, 4, "ss");
  } else if (ends_with(w, "ies")) {
    replace_suffix(w, 3, "i");
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  bool trimmed = false;
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    trimmed = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    trimmed = true;
  }
  if (!trimmed) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (double_consonant(w, w.size())) {
    char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step2(std::string& w) {
  static constexpr std::array<Rule, 20> kRules{{
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
  }};
  apply_longest(w, kRules, 0);
}

void step3(std::string& w) {
  static constexpr std::array<Rule, 7> kRules{{
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""},
  }};
  apply_longest(w, kRules, 0);
}

void step4(std::string& w) {
  static constexpr std::array<std::string_view, 19> kSuffixes{
      "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
      "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
  std::string_view best;
  for (auto s : kSuffixes) {
    if (ends_with(w, s) && s.size() > best.size()) best = s;
  }
  if (best.empty()) return;
  size_t stem = w.size() - best.size();
  if (measure(w, stem) <= 1) return;
  if (best == "ion" && !(stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't'))) return;
  w.resize(stem);
}

void step5(std::string& w) {
  if (ends_with(w, "e")) {
    int m = measure(w, w.size() - 1);
    if (m > 1 || (m == 1 && !cvc(w, w.size() - 1))) w.pop_back();
  }
  if (measure(w, w.size()) > 1 && double_consonant(w, w.size()) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5(w);
  return w;
}

}  // namespace scribebench::rouge
