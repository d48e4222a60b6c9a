//
// Copyright 2026 The bioner-gen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "bioner/text.h"

#include <algorithm>

namespace bioner {

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<Token> Tokenize(std::string_view text, TokenizerMode mode) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto emit = [&](std::size_t b, std::size_t e) {
    tokens.push_back(Token{std::string(text.substr(b, e - b)), b, e});
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsAsciiSpace(c)) {
      ++i;
      continue;
    }
    if (mode == TokenizerMode::kPunctSplit && IsAsciiPunct(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      const auto d = static_cast<unsigned char>(text[j]);
      if (IsAsciiSpace(d)) break;
      if (mode == TokenizerMode::kPunctSplit && IsAsciiPunct(d)) break;
      ++j;
    }
    emit(i, j);
    i = j;
  }
  return tokens;
}

std::string NormalizeMention(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool pending_space = false;
  for (const char ch : surface) {
    const auto c = static_cast<unsigned char>(ch);
    if (IsAsciiPunct(c)) continue;
    if (IsAsciiSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                       : ch);
  }
  return out;
}

namespace {

bool Inside(const std::vector<std::pair<std::size_t, std::size_t>>& spans,
            std::size_t boundary) {
  // Spans are sorted by start; a boundary strictly inside any span blocks.
  auto it = std::upper_bound(
      spans.begin(), spans.end(), boundary,
      [](std::size_t b, const auto& span) { return b < span.first; });
  for (auto s = spans.begin(); s != it; ++s) {
    if (s->first < boundary && boundary < s->second) return true;
  }
  return false;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> SplitSentences(
    std::string_view text, const std::vector<Token>& tokens,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_spans) {
  std::vector<std::pair<std::size_t, std::size_t>> sentences;
  if (tokens.empty()) return sentences;
  auto spans = protected_spans;
  std::sort(spans.begin(), spans.end());

  std::size_t first = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& cur = tokens[i];
    const Token& next = tokens[i + 1];
    const std::string_view gap =
        text.substr(cur.end, next.start - cur.end);
    bool boundary = gap.find('\n') != std::string_view::npos;
    if (!boundary && !gap.empty() && cur.text.size() == 1 &&
        (cur.text[0] == '.' || cur.text[0] == '!' || cur.text[0] == '?')) {
      const auto lead = static_cast<unsigned char>(next.text[0]);
      boundary = IsAsciiUpper(lead) || (lead >= '0' && lead <= '9') ||
                 lead == '(' || lead == '[';
    }
    if (boundary && !Inside(spans, next.start) && !Inside(spans, cur.end)) {
      sentences.emplace_back(first, i + 1);
      first = i + 1;
    }
  }
  sentences.emplace_back(first, tokens.size());
  return sentences;
}

std::vector<std::size_t> CodepointOffsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c >= 0xf0 && c < 0xf8) {
      len = 4;
    } else if (c >= 0xe0) {
      len = 3;
    } else if (c >= 0xc0) {
      len = 2;
    }
    if (c >= 0xf8 || (c >= 0x80 && c < 0xc0)) len = 1;
    std::size_t j = 1;
    while (j < len && i + j < text.size() &&
           (static_cast<unsigned char>(text[i + j]) & 0xc0) == 0x80) {
      ++j;
    }
    i += j;
  }
  offsets.push_back(text.size());
  return offsets;
}

}  // namespace bioner
