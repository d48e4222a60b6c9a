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

#ifndef BIONER_BIO_H_
#define BIONER_BIO_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bioner/corpus.h"

namespace bioner {

// Class inventory of the BIO scheme: B-t, I-t for every type t in sorted
// order, then O. For a single type the order is (B, I, O).
class TagScheme {
 public:
  TagScheme() = default;
  explicit TagScheme(const std::set<std::string>& types);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& types() const { return types_; }
  const std::string& label(std::size_t k) const { return labels_.at(k); }

  std::size_t Outside() const { return labels_.size() - 1; }
  std::size_t Begin(std::string_view type) const;
  std::size_t Inside(std::string_view type) const;
  std::optional<std::size_t> Find(std::string_view label) const;

  bool operator==(const TagScheme&) const = default;

 private:
  std::vector<std::string> types_;
  std::vector<std::string> labels_;
};

using TagSequence = std::vector<std::string>;

struct BioOptions {
  // Misaligned mentions are rejected unless this is set, in which case the
  // enclosing token run is tagged.
  bool project_misaligned = false;
};

// Tags the tokens of `sentence`. Overlapping mentions are resolved by keeping
// the longer one (earlier on ties); each dropped mention adds a warning.
TagSequence ToBio(const Document& doc, const Sentence& sentence,
                  const BioOptions& options = {},
                  std::vector<Issue>* warnings = nullptr);

enum class BioRepair {
  kRepair,  // a stray I-t starts a new mention, as if it were B-t
  kStrict,  // a stray I-t is a ParseError
};

bool IsLegalTransition(std::string_view prev, std::string_view cur);

// Decodes a tag sequence into mentions with surfaces taken from `text`. The
// CUI list of every decoded mention is {"-1"}.
std::vector<Mention> FromBio(std::string_view text,
                             const std::vector<Token>& tokens,
                             const TagSequence& tags,
                             BioRepair repair = BioRepair::kRepair);

// Rewrites stray I- tags in place as B- tags.
void RepairBio(TagSequence& tags);

}  // namespace bioner

#endif  // BIONER_BIO_H_
