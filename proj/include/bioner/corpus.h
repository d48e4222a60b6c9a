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

#ifndef BIONER_CORPUS_H_
#define BIONER_CORPUS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bioner {

// Base class for every error raised by the toolkit. The CLI maps it to the
// "data error" exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kUnknownCui = "-1";

enum class SplitRole { kTrain, kDev, kTest };

enum class TokenizerMode {
  kPunctSplit,  // every ASCII punctuation character is its own token
  kWhitespace,  // tokens are maximal non-whitespace runs
};

std::string_view ToString(SplitRole role);
SplitRole SplitRoleFromString(std::string_view s);
std::string_view ToString(TokenizerMode mode);
TokenizerMode TokenizerModeFromString(std::string_view s);

// Offsets are byte offsets into the owning document's text; `end` is
// exclusive.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct Mention {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::string> cuis;
  std::string type;
  // Set when the span does not coincide with token boundaries; the BIO
  // projection then covers the enclosing token run.
  bool misaligned = false;

  bool HasOnlyUnknownCui() const {
    return cuis.size() == 1 && cuis.front() == kUnknownCui;
  }
  bool operator==(const Mention&) const = default;
};

struct Sentence {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<Token> tokens;
  // Indices into Document::mentions, in document order.
  std::vector<std::size_t> mention_ids;

  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  // Byte length of the title when the text is a PubTator title/abstract
  // concatenation; the joiner character follows the title.
  std::optional<std::size_t> title_length;
  // Sorted by (start, end). Every mention lies inside exactly one sentence.
  std::vector<Mention> mentions;
  std::vector<Sentence> sentences;

  std::vector<Mention> SentenceMentions(const Sentence& sentence) const;
  bool operator==(const Document&) const = default;
};

// A non-fatal problem found while reading or transforming a corpus. Parsers
// collect these instead of dropping input silently.
struct Issue {
  std::string doc_id;
  std::size_t line = 0;  // 1-based source line, 0 when not applicable
  std::string kind;      // machine-readable id, e.g. "span_mismatch"
  std::string message;

  bool operator==(const Issue&) const = default;
};

struct Corpus {
  SplitRole role = SplitRole::kTrain;
  TokenizerMode tokenizer = TokenizerMode::kPunctSplit;
  std::vector<Document> documents;
  std::set<std::string> entity_types;
  std::vector<Issue> issues;    // parse errors; fatal unless lenient
  std::vector<Issue> warnings;  // informational (overlaps, misalignment)

  bool IsSingleType() const { return entity_types.size() == 1; }
  std::size_t SentenceCount() const;
  std::size_t MentionCount() const;
  const Document* FindDocument(std::string_view id) const;
  bool operator==(const Corpus&) const = default;
};

// Options shared by all corpus readers.
struct LoadOptions {
  SplitRole role = SplitRole::kTrain;
  TokenizerMode tokenizer = TokenizerMode::kPunctSplit;
  // Keep only mentions of this type (e.g. "Disease" for a CDR disease view).
  std::string keep_type;
  // Relabel every remaining mention with this type (NCBI's four disease
  // subtypes are evaluated as a single "Disease" type).
  std::string collapse_type;
};

// Re-derives tokens, sentences, mention/sentence membership, misalignment
// flags and entity types of a document set from its texts and mentions.
// Mentions are sorted and CUI lists deduplicated. Warnings are appended to
// `corpus.warnings`.
void Finalize(Corpus& corpus);

// Applies keep_type / collapse_type, then Finalize.
void ApplyTypeOptions(Corpus& corpus, const LoadOptions& options);

// Checks the structural invariants (offsets, surfaces, token partition,
// sentence membership). Returns a list of violations, empty when valid.
std::vector<std::string> CheckInvariants(const Corpus& corpus);

}  // namespace bioner

#endif  // BIONER_CORPUS_H_
