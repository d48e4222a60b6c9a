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

#ifndef BIONER_DICTIONARY_H_
#define BIONER_DICTIONARY_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bioner/corpus.h"

namespace bioner {

// A predicted entity span at document level.
struct Prediction {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  auto operator<=>(const Prediction&) const = default;
};

enum class Provenance { kTrainMention, kSynonym };

struct DictEntry {
  std::string exemplar;  // first surface seen for this key
  std::string type;
  Provenance provenance = Provenance::kTrainMention;
  std::size_t max_tokens = 1;  // longest token length among its surfaces

  bool operator==(const DictEntry&) const = default;
};

// Surface dictionary keyed by NormalizeMention output.
class EntityDictionary {
 public:
  explicit EntityDictionary(TokenizerMode mode = TokenizerMode::kPunctSplit)
      : mode_(mode) {}

  // Adds a surface; returns false when its normalized form is empty. An
  // existing key keeps its type and provenance.
  bool Add(std::string_view surface, std::string_view type,
           Provenance provenance);

  const DictEntry* Find(std::string_view key) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_tokens() const { return max_tokens_; }
  TokenizerMode mode() const { return mode_; }
  const std::map<std::string, DictEntry, std::less<>>& entries() const {
    return entries_;
  }

  // Sorted, tab-separated: key, type, provenance, max_tokens, exemplar.
  void Export(std::ostream& out) const;
  static EntityDictionary Import(std::istream& in, TokenizerMode mode);

  bool operator==(const EntityDictionary&) const = default;

 private:
  TokenizerMode mode_;
  std::map<std::string, DictEntry, std::less<>> entries_;
  std::size_t max_tokens_ = 0;
};

// CUI -> surfaces, read from JSON lines `{"cui": ..., "surfaces": [...]}`.
using SynonymMap = std::map<std::string, std::vector<std::string>>;

SynonymMap ReadSynonyms(std::istream& in);
SynonymMap LoadSynonyms(const std::string& path);

// Dictionary of all training surfaces. Entry types are the most frequent
// type of the surface in training (lexicographically smallest on ties).
EntityDictionary BuildDictTrain(const Corpus& train);

// DICT_train plus every synonym of every training CUI ("-1" excluded).
// Synonym entries take the most frequent training type of their CUI.
EntityDictionary BuildDictSyn(const Corpus& train, const SynonymMap& synonyms);

// Longest-match extraction over the document's tokens. Candidates are token
// n-grams (n <= dict.max_tokens()) that begin and end on a token with a
// non-empty normalized form and whose normalized text is a key. The longest
// candidate (in bytes; leftmost on ties) is kept and every candidate
// overlapping it discarded, until none remain. Output is sorted by start.
std::vector<Prediction> Extract(const EntityDictionary& dict,
                                const Document& doc);

std::vector<Prediction> ExtractCorpus(const EntityDictionary& dict,
                                      const Corpus& corpus, int threads = 1);

}  // namespace bioner

#endif  // BIONER_DICTIONARY_H_
