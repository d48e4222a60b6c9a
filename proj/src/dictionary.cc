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

#include "bioner/dictionary.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "bioner/parallel.h"
#include "bioner/text.h"

namespace bioner {

bool EntityDictionary::Add(std::string_view surface, std::string_view type,
                           Provenance provenance) {
  std::string key = NormalizeMention(surface);
  if (key.empty()) return false;
  const std::size_t n_tokens =
      std::max<std::size_t>(1, Tokenize(surface, mode_).size());
  auto [it, inserted] = entries_.try_emplace(
      std::move(key),
      DictEntry{std::string(surface), std::string(type), provenance, n_tokens});
  if (!inserted) {
    it->second.max_tokens = std::max(it->second.max_tokens, n_tokens);
  }
  max_tokens_ = std::max(max_tokens_, it->second.max_tokens);
  return true;
}

const DictEntry* EntityDictionary::Find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void EntityDictionary::Export(std::ostream& out) const {
  for (const auto& [key, e] : entries_) {
    out << key << '\t' << e.type << '\t'
        << (e.provenance == Provenance::kTrainMention ? "train" : "synonym")
        << '\t' << e.max_tokens << '\t' << e.exemplar << '\n';
  }
}

EntityDictionary EntityDictionary::Import(std::istream& in,
                                          TokenizerMode mode) {
  EntityDictionary dict(mode);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 5) {
      throw ParseError("dictionary line " + std::to_string(line_no) +
                       ": expected 5 tab-separated fields");
    }
    DictEntry e{f[4], f[1],
                f[2] == "synonym" ? Provenance::kSynonym
                                  : Provenance::kTrainMention,
                static_cast<std::size_t>(std::stoul(f[3]))};
    dict.max_tokens_ = std::max(dict.max_tokens_, e.max_tokens);
    dict.entries_.emplace(f[0], std::move(e));
  }
  return dict;
}

SynonymMap ReadSynonyms(std::istream& in) {
  SynonymMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto& surfaces = map[j.at("cui").get<std::string>()];
      for (const auto& s : j.at("surfaces")) {
        surfaces.push_back(s.get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("synonym file line " + std::to_string(line_no) +
                       ": expected {\"cui\": str, \"surfaces\": [str, ...]} (" +
                       e.what() + ")");
    }
  }
  return map;
}

SynonymMap LoadSynonyms(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open synonym file '" + path +
                "' (expected JSON lines {\"cui\": ..., \"surfaces\": [...]})");
  }
  return ReadSynonyms(in);
}

namespace {

// Most frequent value per key, smallest value on ties.
class TypeVotes {
 public:
  void Vote(const std::string& key, const std::string& type) {
    ++votes_[key][type];
  }
  std::string Winner(const std::string& key) const {
    auto it = votes_.find(key);
    if (it == votes_.end()) return {};
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [type, count] : it->second) {
      if (count > best_count) {
        best = type;
        best_count = count;
      }
    }
    return best;
  }

 private:
  std::unordered_map<std::string, std::map<std::string, std::size_t>> votes_;
};

}  // namespace

EntityDictionary BuildDictTrain(const Corpus& train) {
  TypeVotes votes;
  for (const Document& doc : train.documents) {
    for (const Mention& m : doc.mentions) {
      votes.Vote(NormalizeMention(m.surface), m.type);
    }
  }
  EntityDictionary dict(train.tokenizer);
  for (const Document& doc : train.documents) {
    for (const Mention& m : doc.mentions) {
      dict.Add(m.surface, votes.Winner(NormalizeMention(m.surface)),
               Provenance::kTrainMention);
    }
  }
  if (dict.empty()) throw Error("training corpus has no usable mentions");
  return dict;
}

EntityDictionary BuildDictSyn(const Corpus& train, const SynonymMap& synonyms) {
  EntityDictionary dict = BuildDictTrain(train);
  TypeVotes cui_types;
  std::set<std::string> train_cuis;
  for (const Document& doc : train.documents) {
    for (const Mention& m : doc.mentions) {
      for (const std::string& cui : m.cuis) {
        if (cui == kUnknownCui) continue;
        train_cuis.insert(cui);
        cui_types.Vote(cui, m.type);
      }
    }
  }
  for (const std::string& cui : train_cuis) {
    auto it = synonyms.find(cui);
    if (it == synonyms.end()) continue;
    for (const std::string& surface : it->second) {
      dict.Add(surface, cui_types.Winner(cui), Provenance::kSynonym);
    }
  }
  return dict;
}

std::vector<Prediction> Extract(const EntityDictionary& dict,
                                const Document& doc) {
  std::vector<const Token*> tokens;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) tokens.push_back(&t);
  }
  std::vector<bool> anchor(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    anchor[i] = !NormalizeMention(tokens[i]->text).empty();
  }

  struct Candidate {
    std::size_t first;
    std::size_t last;  // inclusive token index
    const DictEntry* entry;
  };
  std::vector<Candidate> candidates;
  const std::string_view text = doc.text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!anchor[i]) continue;
    for (std::size_t n = 1; n <= dict.max_tokens() && i + n <= tokens.size();
         ++n) {
      const std::size_t j = i + n - 1;
      if (!anchor[j]) continue;
      const std::size_t b = tokens[i]->start;
      const std::size_t e = tokens[j]->end;
      const std::string key = NormalizeMention(text.substr(b, e - b));
      if (const DictEntry* entry = dict.Find(key)) {
        candidates.push_back({i, j, entry});
      }
    }
  }

  auto length = [&](const Candidate& c) {
    return tokens[c.last]->end - tokens[c.first]->start;
  };
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) {
              if (length(a) != length(b)) return length(a) > length(b);
              if (a.first != b.first) return a.first < b.first;
              return a.last < b.last;
            });
  std::vector<bool> used(tokens.size(), false);
  std::vector<Prediction> out;
  for (const Candidate& c : candidates) {
    bool free = true;
    for (std::size_t k = c.first; k <= c.last && free; ++k) free = !used[k];
    if (!free) continue;
    for (std::size_t k = c.first; k <= c.last; ++k) used[k] = true;
    out.push_back({doc.id, tokens[c.first]->start, tokens[c.last]->end,
                   c.entry->type});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Prediction> ExtractCorpus(const EntityDictionary& dict,
                                      const Corpus& corpus, int threads) {
  std::vector<std::vector<Prediction>> per_doc(corpus.documents.size());
  ParallelFor(corpus.documents.size(), threads, [&](std::size_t d) {
    per_doc[d] = Extract(dict, corpus.documents[d]);
  });
  std::vector<Prediction> out;
  for (auto& p : per_doc) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace bioner
