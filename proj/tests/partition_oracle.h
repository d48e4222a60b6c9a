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

#ifndef BIONER_TESTS_PARTITION_ORACLE_H_
#define BIONER_TESTS_PARTITION_ORACLE_H_

#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bioner/partition.h"
#include "test_util.h"

namespace bioner::testing {

// Straight-line restatement of the split rules: linear scans over the raw
// training mentions, with its own normalizer.
inline std::string OracleNormalize(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::ispunct(c)) continue;
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

inline Split OracleSplit(const Mention& m, const Corpus& train,
                         const Corpus& eval) {
  const std::string key = OracleNormalize(m.surface);
  bool surface_seen = false;
  bool cui_seen = false;
  for (const Document& doc : train.documents) {
    for (const Mention& t : doc.mentions) {
      if (!key.empty() && OracleNormalize(t.surface) == key) surface_seen = true;
      for (const std::string& tc : t.cuis) {
        if (tc == "-1") continue;
        for (const std::string& c : m.cuis) cui_seen = cui_seen || c == tc;
      }
    }
  }
  if (m.cuis.size() == 1 && m.cuis[0] == "-1") return Split::kCon;
  if (surface_seen && cui_seen) return Split::kMem;
  if (surface_seen) {
    std::set<std::string> types = train.entity_types;
    types.insert(eval.entity_types.begin(), eval.entity_types.end());
    return types.size() <= 1 ? Split::kMem : Split::kCon;
  }
  return cui_seen ? Split::kSyn : Split::kCon;
}

struct OracleResult {
  std::size_t mentions = 0;
  std::size_t disagreements = 0;
  std::string first_disagreement;
};

// Compares PartitionCorpus against the oracle on `trials` random
// train/eval pairs with at most 20 evaluation mentions each.
inline OracleResult RunPartitionOracle(std::size_t trials, std::uint64_t seed) {
  OracleResult r;
  std::mt19937_64 rng(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t vocab = 3 + rng() % 8;
    const std::size_t cuis = 2 + rng() % 6;
    Corpus train = RandomCorpus(rng, 1 + rng() % 3, 10 + rng() % 20, 0.4,
                                SplitRole::kTrain, vocab, cuis);
    Corpus eval = RandomCorpus(rng, 1 + rng() % 2, 5 + rng() % 15, 0.4,
                               SplitRole::kTest, vocab, cuis);
    // Punctuation and case variants so normalization matters.
    for (Document& doc : eval.documents) {
      for (Mention& m : doc.mentions) {
        if (rng() % 5 == 0) {
          for (std::size_t i = m.start; i < m.end; ++i) {
            doc.text[i] = static_cast<char>(std::toupper(doc.text[i]));
          }
          m.surface = doc.text.substr(m.start, m.end - m.start);
        } else if (rng() % 5 == 0) {
          for (std::size_t i = m.start; i < m.end; ++i) {
            if (doc.text[i] == ' ') doc.text[i] = '-';
          }
          m.surface = doc.text.substr(m.start, m.end - m.start);
        }
      }
    }
    while (eval.MentionCount() > 20) {
      for (Document& doc : eval.documents) {
        if (!doc.mentions.empty()) {
          doc.mentions.pop_back();
          break;
        }
      }
    }
    if (rng() % 3 == 0) {
      // Multi-type: relabel some training mentions.
      for (Document& doc : train.documents) {
        for (Mention& m : doc.mentions) {
          if (rng() % 2 == 0) m.type = "Chemical";
        }
      }
      train.entity_types.clear();
      Finalize(train);
    }
    eval.entity_types.clear();
    Finalize(eval);
    const SplitReport report =
        PartitionCorpus(eval, BuildTrainSets(train), DatasetKindOf(train, eval), 1);
    for (const SplitAssignment& a : report.assignments) {
      const Document* doc = eval.FindDocument(a.doc_id);
      const Mention& m = doc->mentions[a.mention_index];
      ++r.mentions;
      if (OracleSplit(m, train, eval) != a.split) {
        if (r.disagreements++ == 0) {
          r.first_disagreement = "trial " + std::to_string(trial) + " mention '" +
                                 m.surface + "' got " +
                                 std::string(ToString(a.split));
        }
      }
    }
  }
  return r;
}

}  // namespace bioner::testing

#endif  // BIONER_TESTS_PARTITION_ORACLE_H_
