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

#ifndef BIONER_EXPERIMENTS_H_
#define BIONER_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bioner/corpus.h"

namespace bioner {

// Replaces every whole-word occurrence of `old_surface` (neighbors must not
// be ASCII letters or digits) in every document text, re-deriving mention
// offsets, surfaces, tokens and sentences. Throws when an occurrence
// straddles a mention boundary or the title boundary.
Corpus ReplaceSurface(const Corpus& corpus, std::string_view old_surface,
                      std::string_view new_surface);

// Distinct mention surfaces accepted by IsAbbreviation, sorted.
std::vector<std::string> AbbreviationSurfaces(const Corpus& corpus);

struct Injection {
  Corpus corpus;
  // Original surface -> generated replacement.
  std::map<std::string, std::string> replacements;
};

// Chooses k distinct abbreviation surfaces with a seeded sampler and rewrites
// every mention carrying one of them to a fresh "{LETTERS}-{DIGITS}" string
// (2-5 uppercase letters, 1-3 digits) that occurs nowhere in the corpus.
// Text outside those mentions is untouched.
Injection InjectPattern(const Corpus& train, std::size_t k, std::uint64_t seed);

// Throws unless `pattern` is "{Abbreviation}-{Number}", the only template
// InjectPattern knows how to fill.
void CheckPatternTemplate(std::string_view pattern);

struct Perturbation {
  enum class Kind { kReplaceSurface, kInjectPattern, kTokenization };
  Kind kind = Kind::kReplaceSurface;
  std::string old_surface;
  std::string new_surface;
  std::size_t count = 0;
  std::string pattern = "{Abbreviation}-{Number}";
  TokenizerMode tokenizer = TokenizerMode::kPunctSplit;
  std::uint64_t seed = 0;

  bool operator==(const Perturbation&) const = default;
};

// JSON object {"kind": "replace_surface"|"inject_pattern"|
// "tokenization_mode", ...}; a manifest is one object or an array of them.
std::vector<Perturbation> PerturbationsFromJson(std::string_view text);
std::string PerturbationsToJson(const std::vector<Perturbation>& steps);

// Applies the steps in order. Replacement maps from injections are appended
// to `log` when given.
Corpus ApplyPerturbations(const Corpus& corpus,
                          const std::vector<Perturbation>& steps,
                          std::vector<std::map<std::string, std::string>>* log =
                              nullptr);

struct BiasedCorpusConfig {
  std::size_t filler_words = 400;
  std::size_t modifiers = 12;
  std::size_t heads = 30;
  std::size_t planted_words = 20;  // always B-initial in train
  std::size_t plain_entities = 40;
  // Function words seen both outside mentions and inside "head connector
  // entity" mentions.
  std::size_t connectors = 4;
  double connector_rate = 0.2;     // per filler position
  double linked_mention_rate = 0.15;  // share of training entity slots
  // Share of linked mentions whose middle word is a filler word, so common
  // words are occasionally seen inside mentions.
  double filler_link_rate = 0.0;
  std::size_t train_sentences = 1500;
  std::size_t eval_sentences = 400;
  std::size_t sentences_per_document = 10;
  // Training occurrences of each planted word, as a standalone mention.
  std::size_t planted_train_occurrences = 25;
  // Share of test/dev entity slots holding a held-out "modifier + word"
  // mention (a planted word when any exist, else an unseen head pairing).
  double shifted_rate = 0.4;
  // Share of training heads appearing as standalone mentions.
  double head_standalone_rate = 0.3;
  // Chance that a filler position holds a modifier word instead.
  double modifier_outside_rate = 0.02;

  bool operator==(const BiasedCorpusConfig&) const = default;
};

struct BiasedCorpus {
  Corpus train;
  Corpus dev;
  Corpus test;
  std::vector<std::string> planted_words;
};

// Synthetic single-type corpus: planted words occur only as single-word
// mentions in train and only inside longer "modifier + word" mentions at
// evaluation time. Those shifted mentions carry the planted word's CUI
// (surface unseen, concept seen) or a fresh CUI, so they land in the SYN or
// CON split. Deterministic in (config, seed).
BiasedCorpus MakeBiasedCorpus(const BiasedCorpusConfig& config,
                              std::uint64_t seed);

BiasedCorpusConfig BiasedCorpusConfigFromJson(std::string_view text);
std::string BiasedCorpusConfigToJson(const BiasedCorpusConfig& config);

}  // namespace bioner

#endif  // BIONER_EXPERIMENTS_H_
