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

#include "bioner/bio.h"

#include <algorithm>
#include <numeric>

namespace bioner {

TagScheme::TagScheme(const std::set<std::string>& types)
    : types_(types.begin(), types.end()) {
  for (const std::string& t : types_) {
    labels_.push_back("B-" + t);
    labels_.push_back("I-" + t);
  }
  labels_.push_back("O");
}

std::size_t TagScheme::Begin(std::string_view type) const {
  auto it = std::lower_bound(types_.begin(), types_.end(), type);
  if (it == types_.end() || *it != type) {
    throw Error("entity type '" + std::string(type) + "' not in tag scheme");
  }
  return 2 * static_cast<std::size_t>(it - types_.begin());
}

std::size_t TagScheme::Inside(std::string_view type) const {
  return Begin(type) + 1;
}

std::optional<std::size_t> TagScheme::Find(std::string_view label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return k;
  }
  return std::nullopt;
}

namespace {

bool IsInside(std::string_view tag) { return tag.starts_with("I-"); }
bool IsBegin(std::string_view tag) { return tag.starts_with("B-"); }
std::string_view TypeOf(std::string_view tag) { return tag.substr(2); }

}  // namespace

TagSequence ToBio(const Document& doc, const Sentence& sentence,
                  const BioOptions& options, std::vector<Issue>* warnings) {
  TagSequence tags(sentence.tokens.size(), "O");
  std::vector<std::size_t> order(sentence.mention_ids);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const Mention& ma = doc.mentions[a];
                     const Mention& mb = doc.mentions[b];
                     return ma.end - ma.start > mb.end - mb.start;
                   });
  std::vector<bool> taken(sentence.tokens.size(), false);
  for (std::size_t id : order) {
    const Mention& m = doc.mentions[id];
    if (m.misaligned && !options.project_misaligned) {
      throw Error("doc " + doc.id + ": mention '" + m.surface +
                  "' is not aligned to token boundaries");
    }
    // Covering token run: tokens that intersect [start, end).
    std::size_t first = sentence.tokens.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& t = sentence.tokens[i];
      if (t.end > m.start && t.start < m.end) {
        first = std::min(first, i);
        last = i + 1;
      }
    }
    if (first >= last) continue;
    bool clash = false;
    for (std::size_t i = first; i < last; ++i) clash = clash || taken[i];
    if (clash) {
      if (warnings != nullptr) {
        warnings->push_back({doc.id, 0, "overlap",
                             "dropped overlapping mention '" + m.surface +
                                 "' from BIO projection"});
      }
      continue;
    }
    for (std::size_t i = first; i < last; ++i) {
      taken[i] = true;
      tags[i] = (i == first ? "B-" : "I-") + m.type;
    }
  }
  return tags;
}

bool IsLegalTransition(std::string_view prev, std::string_view cur) {
  if (!IsInside(cur)) return true;
  if (prev.empty() || prev == "O") return false;
  return TypeOf(prev) == TypeOf(cur);
}

void RepairBio(TagSequence& tags) {
  std::string_view prev;
  for (std::string& tag : tags) {
    if (!IsLegalTransition(prev, tag)) tag = "B-" + tag.substr(2);
    prev = tag;
  }
}

std::vector<Mention> FromBio(std::string_view text,
                             const std::vector<Token>& tokens,
                             const TagSequence& tags, BioRepair repair) {
  if (tags.size() != tokens.size()) {
    throw Error("tag sequence length differs from token count");
  }
  std::vector<Mention> out;
  std::string_view prev;
  std::size_t open = tokens.size();  // index of the first token of the run
  auto close = [&](std::size_t end_token) {
    if (open == tokens.size()) return;
    Mention m;
    m.start = tokens[open].start;
    m.end = tokens[end_token - 1].end;
    m.surface = std::string(text.substr(m.start, m.end - m.start));
    m.type = std::string(TypeOf(tags[open]));
    m.cuis = {std::string(kUnknownCui)};
    out.push_back(std::move(m));
    open = tokens.size();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string_view tag = tags[i];
    if (tag != "O" && !IsBegin(tag) && !IsInside(tag)) {
      throw ParseError("malformed BIO tag '" + std::string(tag) + "'");
    }
    bool begins = IsBegin(tag);
    if (IsInside(tag) && !IsLegalTransition(prev, tag)) {
      if (repair == BioRepair::kStrict) {
        throw ParseError("illegal transition " +
                         std::string(prev.empty() ? "<start>" : prev) +
                         " -> " + std::string(tag) + " at token " +
                         std::to_string(i));
      }
      begins = true;
    }
    if (tag == "O" || begins) close(i);
    if (begins) open = i;
    prev = tag;
  }
  close(tags.size());
  return out;
}

}  // namespace bioner
