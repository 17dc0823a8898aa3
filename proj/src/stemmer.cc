// Copyright 2026 The convsearch Authors.
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

#include "convsearch/stemmer.h"

#include <algorithm>

namespace convsearch {
namespace {

bool IsConsonant(const std::string &w, int i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !IsConsonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0, len).
int Measure(const std::string &w, int len) {
  int i = 0;
  while (i < len && IsConsonant(w, i)) ++i;
  int m = 0;
  while (i < len) {
    while (i < len && !IsConsonant(w, i)) ++i;
    if (i >= len) break;
    while (i < len && IsConsonant(w, i)) ++i;
    ++m;
  }
  return m;
}

bool HasVowel(const std::string &w, int len) {
  for (int i = 0; i < len; ++i) {
    if (!IsConsonant(w, i)) return true;
  }
  return false;
}

bool EndsWithDoubleConsonant(const std::string &w) {
  const int n = static_cast<int>(w.size());
  return n >= 2 && w[n - 1] == w[n - 2] && IsConsonant(w, n - 1);
}

// consonant-vowel-consonant ending, last consonant not w, x or y.
bool EndsCvc(const std::string &w) {
  const int n = static_cast<int>(w.size());
  if (n < 3) return false;
  if (!IsConsonant(w, n - 1) || IsConsonant(w, n - 2) ||
      !IsConsonant(w, n - 3)) {
    return false;
  }
  const char c = w[n - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool EndsWith(const std::string &w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

void Step1a(std::string &w) {
  if (EndsWith(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (EndsWith(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (EndsWith(w, "ss")) {
    // unchanged
  } else if (EndsWith(w, "s")) {
    w.pop_back();
  }
}

void Step1b(std::string &w) {
  const int n = static_cast<int>(w.size());
  if (EndsWith(w, "eed")) {
    if (Measure(w, n - 3) > 0) w.pop_back();
    return;
  }
  int cut = 0;
  if (EndsWith(w, "ed") && HasVowel(w, n - 2)) {
    cut = 2;
  } else if (EndsWith(w, "ing") && HasVowel(w, n - 3)) {
    cut = 3;
  }
  if (cut == 0) return;
  w.resize(n - cut);
  if (EndsWith(w, "at") || EndsWith(w, "bl") || EndsWith(w, "iz")) {
    w.push_back('e');
  } else if (EndsWithDoubleConsonant(w)) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (Measure(w, static_cast<int>(w.size())) == 1 && EndsCvc(w)) {
    w.push_back('e');
  }
}

void Step1c(std::string &w) {
  const int n = static_cast<int>(w.size());
  if (n > 0 && w[n - 1] == 'y' && HasVowel(w, n - 1)) w[n - 1] = 'i';
}

std::string StemOnce(std::string w) {
  if (w.size() <= 2) return w;
  Step1a(w);
  Step1b(w);
  Step1c(w);
  return w;
}

}  // namespace

std::string PorterStemmer::Stem(std::string_view token) const {
  if (token.empty() ||
      !std::all_of(token.begin(), token.end(),
                   [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(token);
  }
  std::string current(token);
  // Every rewrite shortens the word or turns a final y into i, so the
  // fixpoint is reached in a handful of rounds.
  for (;;) {
    std::string next = StemOnce(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

const Stemmer &DefaultStemmer() {
  static const PorterStemmer stemmer;
  return stemmer;
}

}  // namespace convsearch
