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

#include "bioner/experiments.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "bioner/eval.h"
#include "bioner/text.h"

namespace bioner {
namespace {

using json = nlohmann::ordered_json;

struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;
};

// Shift applied to a boundary at `pos`: edits ending at or before it.
std::ptrdiff_t ShiftAt(const std::vector<Edit>& edits, std::size_t pos) {
  std::ptrdiff_t shift = 0;
  for (const Edit& e : edits) {
    if (e.end > pos) break;
    shift += static_cast<std::ptrdiff_t>(e.replacement.size()) -
             static_cast<std::ptrdiff_t>(e.end - e.start);
  }
  return shift;
}

// Applies sorted, disjoint edits. Every edit must lie inside or outside each
// mention.
void RewriteDocument(Document& doc, const std::vector<Edit>& edits) {
  if (edits.empty()) return;
  for (const Mention& m : doc.mentions) {
    for (const Edit& e : edits) {
      const bool overlaps = e.start < m.end && m.start < e.end;
      const bool inside = m.start <= e.start && e.end <= m.end;
      if (overlaps && !inside) {
        throw Error("doc " + doc.id + ": replacement at [" +
                    std::to_string(e.start) + "," + std::to_string(e.end) +
                    ") cuts across mention '" + m.surface + "'");
      }
    }
  }
  if (doc.title_length) {
    const std::size_t tl = *doc.title_length;
    for (const Edit& e : edits) {
      if (e.start < tl && tl < e.end) {
        throw Error("doc " + doc.id + ": replacement crosses the title end");
      }
    }
    doc.title_length = tl + ShiftAt(edits, tl);
  }

  std::string text;
  text.reserve(doc.text.size());
  std::size_t cursor = 0;
  for (const Edit& e : edits) {
    text.append(doc.text, cursor, e.start - cursor);
    text += e.replacement;
    cursor = e.end;
  }
  text.append(doc.text, cursor, std::string::npos);

  for (Mention& m : doc.mentions) {
    m.start += ShiftAt(edits, m.start);
    m.end += ShiftAt(edits, m.end);
    m.surface = text.substr(m.start, m.end - m.start);
  }
  doc.text = std::move(text);
}

void Refinalize(Corpus& corpus) {
  std::erase_if(corpus.warnings,
                [](const Issue& w) { return w.kind == "misaligned"; });
  corpus.entity_types.clear();
  Finalize(corpus);
}

bool IsWordBoundary(const std::string& text, std::size_t start,
                    std::size_t end) {
  const bool left = start == 0 ||
                    !IsAsciiAlnum(static_cast<unsigned char>(text[start - 1]));
  const bool right =
      end >= text.size() || !IsAsciiAlnum(static_cast<unsigned char>(text[end]));
  return left && right;
}

std::uint64_t Below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Corpus ReplaceSurface(const Corpus& corpus, std::string_view old_surface,
                      std::string_view new_surface) {
  if (old_surface.empty()) throw Error("surface to replace must be non-empty");
  Corpus out = corpus;
  for (Document& doc : out.documents) {
    std::vector<Edit> edits;
    for (std::size_t pos = doc.text.find(old_surface);
         pos != std::string::npos;) {
      const std::size_t end = pos + old_surface.size();
      if (IsWordBoundary(doc.text, pos, end)) {
        edits.push_back({pos, end, std::string(new_surface)});
        pos = doc.text.find(old_surface, end);
      } else {
        pos = doc.text.find(old_surface, pos + 1);
      }
    }
    RewriteDocument(doc, edits);
  }
  Refinalize(out);
  return out;
}

std::vector<std::string> AbbreviationSurfaces(const Corpus& corpus) {
  std::set<std::string> found;
  for (const Document& doc : corpus.documents) {
    for (const Mention& m : doc.mentions) {
      if (IsAbbreviation(m.surface)) found.insert(m.surface);
    }
  }
  return {found.begin(), found.end()};
}

void CheckPatternTemplate(std::string_view pattern) {
  if (pattern != "{Abbreviation}-{Number}") {
    throw Error("unsupported pattern template '" + std::string(pattern) + "'");
  }
}

Injection InjectPattern(const Corpus& train, std::size_t k, std::uint64_t seed) {
  std::vector<std::string> pool = AbbreviationSurfaces(train);
  if (pool.size() < k) {
    throw Error("corpus has " + std::to_string(pool.size()) +
                " abbreviation surfaces, " + std::to_string(k) + " requested");
  }
  Injection result{train, {}};
  if (k == 0) return result;

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + Below(rng, pool.size() - i)]);
  }

  std::unordered_set<std::string> surfaces;
  for (const Document& doc : train.documents) {
    for (const Mention& m : doc.mentions) surfaces.insert(m.surface);
  }
  std::unordered_set<std::string> used;
  auto occurs = [&](const std::string& s) {
    if (surfaces.contains(s) || used.contains(s)) return true;
    return std::any_of(train.documents.begin(), train.documents.end(),
                       [&](const Document& d) {
                         return d.text.find(s) != std::string::npos;
                       });
  };
  for (std::size_t i = 0; i < k; ++i) {
    std::string fresh;
    do {
      fresh.clear();
      const std::size_t letters = 2 + Below(rng, 4);
      for (std::size_t j = 0; j < letters; ++j) {
        fresh += static_cast<char>('A' + Below(rng, 26));
      }
      fresh += '-';
      const std::size_t digits = 1 + Below(rng, 3);
      for (std::size_t j = 0; j < digits; ++j) {
        fresh += static_cast<char>('0' + Below(rng, 10));
      }
    } while (occurs(fresh));
    used.insert(fresh);
    result.replacements.emplace(pool[i], std::move(fresh));
  }

  for (Document& doc : result.corpus.documents) {
    std::vector<Edit> edits;
    for (const Mention& m : doc.mentions) {
      auto it = result.replacements.find(m.surface);
      if (it != result.replacements.end()) {
        edits.push_back({m.start, m.end, it->second});
      }
    }
    std::sort(edits.begin(), edits.end(),
              [](const Edit& a, const Edit& b) { return a.start < b.start; });
    edits.erase(std::unique(edits.begin(), edits.end(),
                            [](const Edit& a, const Edit& b) {
                              return a.start == b.start && a.end == b.end;
                            }),
                edits.end());
    RewriteDocument(doc, edits);
  }
  Refinalize(result.corpus);
  return result;
}

std::vector<Perturbation> PerturbationsFromJson(std::string_view text) {
  std::vector<Perturbation> steps;
  try {
    json j = json::parse(text);
    if (j.is_object() && j.contains("perturbations")) j = j["perturbations"];
    if (!j.is_array()) j = json::array({j});
    for (const json& item : j) {
      Perturbation p;
      const std::string kind = item.at("kind").get<std::string>();
      p.seed = item.value("seed", std::uint64_t{0});
      if (kind == "replace_surface") {
        p.kind = Perturbation::Kind::kReplaceSurface;
        p.old_surface = item.at("old").get<std::string>();
        p.new_surface = item.at("new").get<std::string>();
      } else if (kind == "inject_pattern") {
        p.kind = Perturbation::Kind::kInjectPattern;
        p.count = item.at("count").get<std::size_t>();
        p.pattern = item.value("pattern", p.pattern);
        CheckPatternTemplate(p.pattern);
      } else if (kind == "tokenization_mode") {
        p.kind = Perturbation::Kind::kTokenization;
        p.tokenizer =
            TokenizerModeFromString(item.at("tokenizer").get<std::string>());
      } else {
        throw Error("unknown perturbation kind '" + kind + "'");
      }
      steps.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid perturbation manifest: ") + e.what());
  }
  return steps;
}

std::string PerturbationsToJson(const std::vector<Perturbation>& steps) {
  json out = json::array();
  for (const Perturbation& p : steps) {
    json j;
    switch (p.kind) {
      case Perturbation::Kind::kReplaceSurface:
        j["kind"] = "replace_surface";
        j["old"] = p.old_surface;
        j["new"] = p.new_surface;
        break;
      case Perturbation::Kind::kInjectPattern:
        j["kind"] = "inject_pattern";
        j["count"] = p.count;
        j["pattern"] = p.pattern;
        break;
      case Perturbation::Kind::kTokenization:
        j["kind"] = "tokenization_mode";
        j["tokenizer"] = std::string(ToString(p.tokenizer));
        break;
    }
    j["seed"] = p.seed;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

Corpus ApplyPerturbations(const Corpus& corpus,
                          const std::vector<Perturbation>& steps,
                          std::vector<std::map<std::string, std::string>>* log) {
  Corpus current = corpus;
  for (const Perturbation& p : steps) {
    switch (p.kind) {
      case Perturbation::Kind::kReplaceSurface:
        current = ReplaceSurface(current, p.old_surface, p.new_surface);
        break;
      case Perturbation::Kind::kInjectPattern: {
        CheckPatternTemplate(p.pattern);
        Injection inj = InjectPattern(current, p.count, p.seed);
        if (log != nullptr) log->push_back(inj.replacements);
        current = std::move(inj.corpus);
        break;
      }
      case Perturbation::Kind::kTokenization:
        current.tokenizer = p.tokenizer;
        Refinalize(current);
        break;
    }
  }
  return current;
}

namespace {

// Pronounceable lowercase pseudo-words, unique across every call on the
// same `taken` set.
class WordMaker {
 public:
  explicit WordMaker(std::mt19937_64& rng) : rng_(rng) {}

  std::vector<std::string> Make(std::size_t n, std::size_t min_syllables,
                                std::size_t max_syllables) {
    static constexpr std::string_view kOnsets[] = {
        "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r",
        "s", "t", "v", "z", "br", "cl", "dr", "gr", "pl", "st", "tr", "ph"};
    static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u",
                                                   "ai", "ea", "io", "ou"};
    static constexpr std::string_view kCodas[] = {"", "", "", "n", "r", "s",
                                                  "l", "x", "m", "t"};
    std::vector<std::string> out;
    std::size_t attempts = 0;
    while (out.size() < n) {
      if (++attempts > 1000 * (n + 10)) {
        throw Error("cannot generate enough distinct words");
      }
      const std::size_t syllables =
          min_syllables + Below(rng_, max_syllables - min_syllables + 1);
      std::string w;
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[Below(rng_, std::size(kOnsets))];
        w += kVowels[Below(rng_, std::size(kVowels))];
      }
      w += kCodas[Below(rng_, std::size(kCodas))];
      if (taken_.insert(w).second) out.push_back(std::move(w));
    }
    return out;
  }

 private:
  std::mt19937_64& rng_;
  std::unordered_set<std::string> taken_;
};

struct Slot {
  std::vector<std::string> words;
  std::string cui;
};

class SentenceWriter {
 public:
  SentenceWriter(std::string prefix, SplitRole role, std::size_t per_doc)
      : prefix_(std::move(prefix)), per_doc_(per_doc) {
    corpus_.role = role;
  }

  // Writes one sentence: filler words with the given slots spliced in at the
  // listed positions (ascending), closed by a period.
  void Add(const std::vector<std::string>& filler,
           const std::vector<std::pair<std::size_t, Slot>>& slots) {
    if (corpus_.documents.empty() || in_doc_ == per_doc_) {
      char id[32];
      std::snprintf(id, sizeof(id), "%s-%04zu", prefix_.c_str(),
                    corpus_.documents.size() + 1);
      corpus_.documents.push_back(Document{id, "", std::nullopt, {}, {}});
      in_doc_ = 0;
    }
    Document& doc = corpus_.documents.back();
    if (in_doc_ > 0) doc.text += '\n';
    ++in_doc_;

    bool first = true;
    auto put = [&](const std::string& w) {
      if (!first) doc.text += ' ';
      first = false;
      doc.text += w;
    };
    std::size_t next = 0;
    for (std::size_t i = 0; i <= filler.size(); ++i) {
      while (next < slots.size() && slots[next].first == i) {
        const Slot& slot = slots[next].second;
        if (!first) doc.text += ' ';
        first = true;
        const std::size_t start = doc.text.size();
        for (const std::string& w : slot.words) put(w);
        doc.mentions.push_back(Mention{doc.text.substr(start), start,
                                       doc.text.size(), {slot.cui}, "Disease",
                                       false});
        first = false;
        ++next;
      }
      if (i < filler.size()) put(filler[i]);
    }
    put(".");
  }

  Corpus Finish() {
    Finalize(corpus_);
    corpus_.entity_types = {"Disease"};
    return std::move(corpus_);
  }

 private:
  std::string prefix_;
  std::size_t per_doc_;
  std::size_t in_doc_ = 0;
  Corpus corpus_;
};

std::string Cui(char kind, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%05zu", kind, i);
  return buf;
}

}  // namespace

BiasedCorpus MakeBiasedCorpus(const BiasedCorpusConfig& config,
                              std::uint64_t seed) {
  const BiasedCorpusConfig& c = config;
  if (c.filler_words < 10 || c.modifiers == 0 || c.heads < 2 ||
      c.plain_entities == 0 || c.train_sentences == 0 ||
      c.eval_sentences == 0 || c.sentences_per_document == 0) {
    throw Error("biased corpus config is infeasible: vocabulary or size is zero");
  }
  for (double rate : {c.shifted_rate, c.head_standalone_rate,
                      c.modifier_outside_rate, c.connector_rate,
                      c.linked_mention_rate, c.filler_link_rate}) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw Error("biased corpus config is infeasible: rates must be in [0,1]");
    }
  }

  std::mt19937_64 rng(seed);
  WordMaker maker(rng);
  const auto filler = maker.Make(c.filler_words, 1, 2);
  const auto modifiers = maker.Make(c.modifiers, 2, 3);
  const auto heads = maker.Make(c.heads, 2, 3);
  const auto planted = maker.Make(c.planted_words, 3, 4);
  const auto plain = maker.Make(c.plain_entities, 2, 4);
  const auto connectors = maker.Make(c.connectors, 1, 1);

  // Each modifier pairs with half of the heads in train; the rest of the
  // pairings are held out.
  std::vector<std::pair<std::size_t, std::size_t>> train_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> held_out_pairs;
  for (std::size_t m = 0; m < modifiers.size(); ++m) {
    for (std::size_t h = 0; h < heads.size(); ++h) {
      ((m + h) % 2 == 0 ? train_pairs : held_out_pairs).emplace_back(m, h);
    }
  }
  auto pair_cui = [&](std::size_t m, std::size_t h) {
    return Cui('M', m * heads.size() + h);
  };

  const std::size_t planted_total = c.planted_words * c.planted_train_occurrences;
  // One or two entity slots per training sentence.
  std::vector<std::size_t> slot_counts(c.train_sentences);
  std::size_t total_slots = 0;
  for (std::size_t& n : slot_counts) {
    n = 1 + Below(rng, 2);
    total_slots += n;
  }
  if (planted_total > total_slots) {
    throw Error("biased corpus config is infeasible: " +
                std::to_string(planted_total) + " planted occurrences exceed " +
                std::to_string(total_slots) + " entity slots");
  }
  enum Kind { kPlanted, kPair, kHead, kPlain, kLinked };
  std::vector<Kind> kinds(total_slots, kPair);
  for (std::size_t i = 0; i < planted_total; ++i) kinds[i] = kPlanted;
  for (std::size_t i = planted_total; i < total_slots; ++i) {
    if (!connectors.empty() && Uniform01(rng) < c.linked_mention_rate) {
      kinds[i] = kLinked;
      continue;
    }
    const double u = Uniform01(rng);
    kinds[i] = u < c.head_standalone_rate * 0.5 ? kHead
               : u < 0.5                        ? kPair
                                                : kPlain;
  }
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[Below(rng, i)]);
  }

  auto filler_run = [&]() {
    std::vector<std::string> words(4 + Below(rng, 7));
    for (std::string& w : words) {
      const double u = Uniform01(rng);
      if (u < c.modifier_outside_rate) {
        w = modifiers[Below(rng, modifiers.size())];
      } else if (!connectors.empty() &&
                 u < c.modifier_outside_rate + c.connector_rate) {
        w = connectors[Below(rng, connectors.size())];
      } else {
        w = filler[Below(rng, filler.size())];
      }
    }
    return words;
  };
  auto positions = [&](std::size_t slots, std::size_t len) {
    std::vector<std::size_t> pos(slots);
    for (std::size_t& p : pos) p = Below(rng, len + 1);
    std::sort(pos.begin(), pos.end());
    return pos;
  };

  std::size_t planted_cursor = 0;
  SentenceWriter train("train", SplitRole::kTrain, c.sentences_per_document);
  std::size_t k = 0;
  for (std::size_t s = 0; s < c.train_sentences; ++s) {
    const auto words = filler_run();
    const auto pos = positions(slot_counts[s], words.size());
    std::vector<std::pair<std::size_t, Slot>> slots;
    for (std::size_t p : pos) {
      Slot slot;
      switch (kinds[k++]) {
        case kPlanted: {
          const std::size_t w = planted_cursor++ % planted.size();
          slot = {{planted[w]}, Cui('P', w)};
          break;
        }
        case kPair: {
          const auto [m, h] = train_pairs[Below(rng, train_pairs.size())];
          slot = {{modifiers[m], heads[h]}, pair_cui(m, h)};
          break;
        }
        case kHead: {
          const std::size_t h = Below(rng, heads.size());
          slot = {{heads[h]}, Cui('H', h)};
          break;
        }
        case kPlain: {
          const std::size_t e = Below(rng, plain.size());
          slot = {{plain[e]}, Cui('E', e)};
          break;
        }
        case kLinked: {
          const std::size_t h = Below(rng, heads.size());
          const std::size_t e = Below(rng, plain.size());
          const std::string& middle =
              Uniform01(rng) < c.filler_link_rate
                  ? filler[Below(rng, filler.size())]
                  : connectors[Below(rng, connectors.size())];
          slot = {{heads[h], middle, plain[e]},
                  Cui('L', h * plain.size() + e)};
          break;
        }
      }
      slots.emplace_back(p, std::move(slot));
    }
    train.Add(words, slots);
  }

  std::size_t fresh_cui = 0;
  auto make_eval = [&](const std::string& prefix, SplitRole role) {
    SentenceWriter writer(prefix, role, c.sentences_per_document);
    for (std::size_t s = 0; s < c.eval_sentences; ++s) {
      const auto words = filler_run();
      const auto pos = positions(1 + Below(rng, 2), words.size());
      std::vector<std::pair<std::size_t, Slot>> slots;
      for (std::size_t p : pos) {
        Slot slot;
        if (Uniform01(rng) < c.shifted_rate) {
          const std::size_t m = Below(rng, modifiers.size());
          const bool concept_seen = Below(rng, 2) == 0;
          if (!planted.empty()) {
            const std::size_t w = Below(rng, planted.size());
            slot = {{modifiers[m], planted[w]},
                    concept_seen ? Cui('P', w) : Cui('N', fresh_cui++)};
          } else {
            const auto [pm, h] =
                held_out_pairs[Below(rng, held_out_pairs.size())];
            slot = {{modifiers[pm], heads[h]},
                    concept_seen ? Cui('H', h) : Cui('N', fresh_cui++)};
          }
        } else {
          const double u = Uniform01(rng);
          if (!planted.empty() && u < 0.3) {
            const std::size_t w = Below(rng, planted.size());
            slot = {{planted[w]}, Cui('P', w)};
          } else if (u < 0.65) {
            const auto [m, h] = train_pairs[Below(rng, train_pairs.size())];
            slot = {{modifiers[m], heads[h]}, pair_cui(m, h)};
          } else {
            const std::size_t e = Below(rng, plain.size());
            slot = {{plain[e]}, Cui('E', e)};
          }
        }
        slots.emplace_back(p, std::move(slot));
      }
      writer.Add(words, slots);
    }
    return writer.Finish();
  };

  BiasedCorpus out;
  out.train = train.Finish();
  out.dev = make_eval("dev", SplitRole::kDev);
  out.test = make_eval("test", SplitRole::kTest);
  out.planted_words = planted;
  return out;
}

BiasedCorpusConfig BiasedCorpusConfigFromJson(std::string_view text) {
  BiasedCorpusConfig c;
  try {
    const json j = json::parse(text);
    c.filler_words = j.value("filler_words", c.filler_words);
    c.modifiers = j.value("modifiers", c.modifiers);
    c.heads = j.value("heads", c.heads);
    c.planted_words = j.value("planted_words", c.planted_words);
    c.plain_entities = j.value("plain_entities", c.plain_entities);
    c.connectors = j.value("connectors", c.connectors);
    c.connector_rate = j.value("connector_rate", c.connector_rate);
    c.linked_mention_rate =
        j.value("linked_mention_rate", c.linked_mention_rate);
    c.filler_link_rate = j.value("filler_link_rate", c.filler_link_rate);
    c.train_sentences = j.value("train_sentences", c.train_sentences);
    c.eval_sentences = j.value("eval_sentences", c.eval_sentences);
    c.sentences_per_document =
        j.value("sentences_per_document", c.sentences_per_document);
    c.planted_train_occurrences =
        j.value("planted_train_occurrences", c.planted_train_occurrences);
    c.shifted_rate = j.value("shifted_rate", c.shifted_rate);
    c.head_standalone_rate =
        j.value("head_standalone_rate", c.head_standalone_rate);
    c.modifier_outside_rate =
        j.value("modifier_outside_rate", c.modifier_outside_rate);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid biased corpus config: ") + e.what());
  }
  return c;
}

std::string BiasedCorpusConfigToJson(const BiasedCorpusConfig& c) {
  json j;
  j["filler_words"] = c.filler_words;
  j["modifiers"] = c.modifiers;
  j["heads"] = c.heads;
  j["planted_words"] = c.planted_words;
  j["plain_entities"] = c.plain_entities;
  j["connectors"] = c.connectors;
  j["connector_rate"] = c.connector_rate;
  j["linked_mention_rate"] = c.linked_mention_rate;
  j["filler_link_rate"] = c.filler_link_rate;
  j["train_sentences"] = c.train_sentences;
  j["eval_sentences"] = c.eval_sentences;
  j["sentences_per_document"] = c.sentences_per_document;
  j["planted_train_occurrences"] = c.planted_train_occurrences;
  j["shifted_rate"] = c.shifted_rate;
  j["head_standalone_rate"] = c.head_standalone_rate;
  j["modifier_outside_rate"] = c.modifier_outside_rate;
  return j.dump(2) + "\n";
}

}  // namespace bioner
