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

#include "bioner/corpus.h"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "bioner/text.h"

namespace bioner {

std::string_view ToString(SplitRole role) {
  switch (role) {
    case SplitRole::kTrain:
      return "train";
    case SplitRole::kDev:
      return "dev";
    case SplitRole::kTest:
      return "test";
  }
  return "train";
}

SplitRole SplitRoleFromString(std::string_view s) {
  if (s == "train") return SplitRole::kTrain;
  if (s == "dev") return SplitRole::kDev;
  if (s == "test") return SplitRole::kTest;
  throw Error("unknown split role '" + std::string(s) + "'");
}

std::string_view ToString(TokenizerMode mode) {
  return mode == TokenizerMode::kPunctSplit ? "punct" : "whitespace";
}

TokenizerMode TokenizerModeFromString(std::string_view s) {
  if (s == "punct" || s == "punct_split") return TokenizerMode::kPunctSplit;
  if (s == "whitespace") return TokenizerMode::kWhitespace;
  throw Error("unknown tokenizer mode '" + std::string(s) + "'");
}

std::vector<Mention> Document::SentenceMentions(
    const Sentence& sentence) const {
  std::vector<Mention> out;
  out.reserve(sentence.mention_ids.size());
  for (std::size_t id : sentence.mention_ids) out.push_back(mentions[id]);
  return out;
}

std::size_t Corpus::SentenceCount() const {
  std::size_t n = 0;
  for (const Document& d : documents) n += d.sentences.size();
  return n;
}

std::size_t Corpus::MentionCount() const {
  std::size_t n = 0;
  for (const Document& d : documents) n += d.mentions.size();
  return n;
}

const Document* Corpus::FindDocument(std::string_view id) const {
  for (const Document& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

namespace {

void DedupeCuis(std::vector<std::string>& cuis) {
  std::vector<std::string> out;
  for (std::string& c : cuis) {
    if (std::find(out.begin(), out.end(), c) == out.end()) {
      out.push_back(std::move(c));
    }
  }
  cuis = std::move(out);
}

void FinalizeDocument(Document& doc, TokenizerMode mode,
                      std::vector<Issue>& warnings) {
  std::stable_sort(doc.mentions.begin(), doc.mentions.end(),
                   [](const Mention& a, const Mention& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.end < b.end;
                   });
  for (Mention& m : doc.mentions) DedupeCuis(m.cuis);

  const std::vector<Token> tokens = Tokenize(doc.text, mode);
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(doc.mentions.size());
  for (const Mention& m : doc.mentions) spans.emplace_back(m.start, m.end);

  doc.sentences.clear();
  for (const auto& [first, last] : SplitSentences(doc.text, tokens, spans)) {
    Sentence s;
    s.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(first),
                    tokens.begin() + static_cast<std::ptrdiff_t>(last));
    s.start = s.tokens.front().start;
    s.end = s.tokens.back().end;
    doc.sentences.push_back(std::move(s));
  }

  std::unordered_set<std::size_t> starts;
  std::unordered_set<std::size_t> ends;
  for (const Token& t : tokens) {
    starts.insert(t.start);
    ends.insert(t.end);
  }
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    Mention& m = doc.mentions[i];
    m.misaligned = !starts.contains(m.start) || !ends.contains(m.end);
    if (m.misaligned) {
      warnings.push_back({doc.id, 0, "misaligned",
                          "mention '" + m.surface + "' at [" +
                              std::to_string(m.start) + "," +
                              std::to_string(m.end) +
                              ") does not fall on token boundaries"});
    }
    // The last sentence starting at or before the mention owns it.
    auto it = std::upper_bound(
        doc.sentences.begin(), doc.sentences.end(), m.start,
        [](std::size_t pos, const Sentence& s) { return pos < s.start; });
    if (it == doc.sentences.begin()) {
      it = doc.sentences.begin();
    } else {
      --it;
    }
    if (it != doc.sentences.end()) it->mention_ids.push_back(i);
  }
}

}  // namespace

void Finalize(Corpus& corpus) {
  for (Document& doc : corpus.documents) {
    FinalizeDocument(doc, corpus.tokenizer, corpus.warnings);
    for (const Mention& m : doc.mentions) corpus.entity_types.insert(m.type);
  }
}

void ApplyTypeOptions(Corpus& corpus, const LoadOptions& options) {
  if (!options.keep_type.empty()) {
    for (Document& doc : corpus.documents) {
      std::erase_if(doc.mentions, [&](const Mention& m) {
        return m.type != options.keep_type;
      });
    }
    corpus.entity_types = {options.keep_type};
  }
  if (!options.collapse_type.empty()) {
    for (Document& doc : corpus.documents) {
      for (Mention& m : doc.mentions) m.type = options.collapse_type;
    }
    corpus.entity_types = {options.collapse_type};
  }
  Finalize(corpus);
}

std::vector<std::string> CheckInvariants(const Corpus& corpus) {
  std::vector<std::string> problems;
  std::unordered_set<std::string> ids;
  for (const Document& doc : corpus.documents) {
    const std::string where = "doc " + doc.id + ": ";
    if (!ids.insert(doc.id).second) problems.push_back(where + "duplicate id");

    for (const Mention& m : doc.mentions) {
      if (m.start >= m.end || m.end > doc.text.size()) {
        problems.push_back(where + "bad mention offsets");
        continue;
      }
      if (doc.text.compare(m.start, m.end - m.start, m.surface) != 0) {
        problems.push_back(where + "mention surface '" + m.surface +
                           "' differs from text");
      }
      if (m.cuis.empty()) problems.push_back(where + "mention without CUI");
      std::set<std::string> unique(m.cuis.begin(), m.cuis.end());
      if (unique.size() != m.cuis.size()) {
        problems.push_back(where + "duplicate CUIs");
      }
    }

    const std::vector<Token> expected = Tokenize(doc.text, corpus.tokenizer);
    std::vector<Token> actual;
    std::vector<int> owner(doc.mentions.size(), 0);
    for (const Sentence& s : doc.sentences) {
      if (s.tokens.empty()) problems.push_back(where + "empty sentence");
      for (const Token& t : s.tokens) {
        if (t.start >= t.end || t.end > doc.text.size() ||
            doc.text.compare(t.start, t.end - t.start, t.text) != 0) {
          problems.push_back(where + "token does not match text");
        }
        actual.push_back(t);
      }
      for (std::size_t id : s.mention_ids) {
        if (id >= doc.mentions.size()) {
          problems.push_back(where + "dangling mention id");
          continue;
        }
        ++owner[id];
        const Mention& m = doc.mentions[id];
        if (!s.tokens.empty() &&
            (m.start < s.tokens.front().start ||
             m.end > s.tokens.back().end)) {
          problems.push_back(where + "mention outside its sentence");
        }
      }
    }
    if (actual != expected) {
      problems.push_back(where + "tokens do not partition the text");
    }
    for (std::size_t i = 1; i < actual.size(); ++i) {
      if (actual[i].start < actual[i - 1].end) {
        problems.push_back(where + "overlapping tokens");
        break;
      }
    }
    for (std::size_t i = 0; i < owner.size(); ++i) {
      if (owner[i] != 1 && !doc.sentences.empty()) {
        problems.push_back(where + "mention " + std::to_string(i) +
                           " owned by " + std::to_string(owner[i]) +
                           " sentences");
      }
    }
  }
  return problems;
}

}  // namespace bioner
