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

#ifndef BIONER_TEXT_H_
#define BIONER_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bioner/corpus.h"

namespace bioner {

inline bool IsAsciiPunct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
         (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}
inline bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
inline bool IsAsciiAlnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}
inline bool IsAsciiUpper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

std::string AsciiLower(std::string_view s);

// Splits `text` into tokens. Offsets always index into `text`; the only
// bytes not covered by a token are whitespace. Non-ASCII bytes are treated
// as word characters.
std::vector<Token> Tokenize(std::string_view text, TokenizerMode mode);

// Lowercases, strips ASCII punctuation, collapses whitespace runs to one
// space and trims. May return an empty string, which callers treat as a key
// that matches nothing.
std::string NormalizeMention(std::string_view surface);

// Rule-based sentence splitter over an already tokenized text. A boundary is
// placed after a '.', '!' or '?' token that is followed by whitespace and a
// token starting with an uppercase letter, a digit or an opening bracket, and
// at every newline. Boundaries falling inside a protected span are skipped.
// Returns [first_token, last_token) ranges.
std::vector<std::pair<std::size_t, std::size_t>> SplitSentences(
    std::string_view text, const std::vector<Token>& tokens,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_spans);

// Byte offset of every code point boundary of a UTF-8 string. The result has
// (number of code points + 1) entries; invalid lead bytes count as one code
// point each.
std::vector<std::size_t> CodepointOffsets(std::string_view text);

}  // namespace bioner

#endif  // BIONER_TEXT_H_
