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

#ifndef BIONER_FORMATS_H_
#define BIONER_FORMATS_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "bioner/bio.h"
#include "bioner/corpus.h"

namespace bioner {

enum class CorpusFormat { kPubtator, kConll, kJsonl };

CorpusFormat CorpusFormatFromString(std::string_view s);

struct PubtatorOptions {
  // Character placed between title and abstract. Distributed offsets assume
  // a single character, so only the character itself is configurable.
  char joiner = ' ';
};

// Reads the PubTator distribution format:
//   <id>|t|<title>
//   <id>|a|<abstract>
//   <id>\t<start>\t<end>\t<surface>\t<type>\t<cui>[|<cui>...][\t...]
// with blank lines between documents. Offsets are code point offsets into
// title + joiner + abstract and are converted to byte offsets. Relation
// lines (`<id>\tCID\t...`) are skipped. Mentions whose surface disagrees with
// the text are dropped and reported in Corpus::issues; a document missing its
// title or abstract line raises ParseError.
Corpus ParsePubtator(std::istream& in, const LoadOptions& options = {},
                     const PubtatorOptions& pubtator = {});
void WritePubtator(std::ostream& out, const Corpus& corpus,
                   const PubtatorOptions& pubtator = {});

// Reads `token tag [cui[|cui...]]` lines with blank lines between sentences.
// `-DOCSTART-` lines start a new document; without them every sentence is its
// own document. Tokens are joined by single spaces and sentences by newlines.
// Illegal I- transitions are repaired or raise ParseError per `repair`.
Corpus ParseConll(std::istream& in, const LoadOptions& options = {},
                  BioRepair repair = BioRepair::kRepair);

// Canonical interchange format: one JSON object per document and line,
//   {"doc_id", "text", "title_length"?, "mentions": [{"start", "end",
//    "surface", "type", "cuis", "misaligned"}], "sentences": [{"start",
//    "end", "tokens": [[start, end], ...]}]}
// Offsets are UTF-8 byte offsets. Sentences are re-derived on load.
Corpus ReadJsonl(std::istream& in, const LoadOptions& options = {});
void WriteJsonl(std::ostream& out, const Corpus& corpus);

Corpus LoadCorpus(const std::string& path, CorpusFormat format,
                  const LoadOptions& options = {});
void SaveJsonl(const std::string& path, const Corpus& corpus);

// Splits a CUI field on '|' and '+' (both occur as multi-concept separators
// in the distributed corpora) and trims whitespace.
std::vector<std::string> SplitCuis(std::string_view field);

}  // namespace bioner

#endif  // BIONER_FORMATS_H_
