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

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "bioner/formats.h"
#include "../test_util.h"

namespace bioner {
namespace {

Corpus Pubtator(const std::string& text, const LoadOptions& options = {}) {
  std::istringstream in(text);
  return ParsePubtator(in, options);
}

Corpus Conll(const std::string& text, BioRepair repair = BioRepair::kRepair) {
  std::istringstream in(text);
  return ParseConll(in, {}, repair);
}

TEST(ParsePubtator, SingleRecord) {
  const Corpus c = Pubtator(
      "d1|t|COVID-19 is bad.\n"
      "d1|a|\n"
      "d1\t0\t8\tCOVID-19\tDisease\t-1\n");
  ASSERT_EQ(c.documents.size(), 1u);
  ASSERT_EQ(c.documents[0].mentions.size(), 1u);
  const Mention& m = c.documents[0].mentions[0];
  EXPECT_EQ(m.surface, "COVID-19");
  EXPECT_EQ(m.cuis, (std::vector<std::string>{"-1"}));
  EXPECT_TRUE(m.HasOnlyUnknownCui());
  EXPECT_TRUE(c.issues.empty());
}

TEST(ParsePubtator, AbstractOffsetsFollowTitlePlusSpace) {
  const Corpus c = Pubtator(
      "7|t|Title.\n"
      "7|a|Lung cancer here.\n"
      "7\t7\t18\tLung cancer\tDisease\tD008175\n"
      "7\tCID\tD1\tD2\n\n");
  ASSERT_EQ(c.documents.size(), 1u);
  const Document& doc = c.documents[0];
  EXPECT_EQ(doc.text, "Title. Lung cancer here.");
  EXPECT_EQ(doc.title_length, 6u);
  ASSERT_EQ(doc.mentions.size(), 1u);
  EXPECT_EQ(doc.mentions[0].start, 7u);
}

TEST(ParsePubtator, CodepointOffsetsBecomeBytes) {
  const Corpus c = Pubtator(
      "u|t|\xc3\xa9t\xc3\xa9 fever\n"
      "u|a|x\n"
      "u\t4\t9\tfever\tDisease\tD1\n");
  ASSERT_EQ(c.documents[0].mentions.size(), 1u);
  EXPECT_EQ(c.documents[0].mentions[0].start, 6u);
  EXPECT_EQ(c.documents[0].mentions[0].end, 11u);
}

TEST(ParsePubtator, SurfaceMismatchIsRecordedAndDocumentKept) {
  const Corpus c = Pubtator(
      "d1|t|Fever and rash.\n"
      "d1|a|\n"
      "d1\t0\t5\tRash\tDisease\tD1\n"
      "d1\t10\t14\trash\tDisease\tD2\n");
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_EQ(c.documents[0].mentions.size(), 1u);
  ASSERT_EQ(c.issues.size(), 1u);
  EXPECT_EQ(c.issues[0].kind, "span_mismatch");
  EXPECT_EQ(c.issues[0].doc_id, "d1");
}

TEST(ParsePubtator, TruncatedDocumentThrows) {
  EXPECT_THROW(Pubtator("d1|t|Only a title.\n\n"), ParseError);
}

TEST(ParsePubtator, MultiCuiFieldsSplitOnBothSeparators) {
  EXPECT_EQ(SplitCuis("D1|D2"), (std::vector<std::string>{"D1", "D2"}));
  EXPECT_EQ(SplitCuis("D1+D2"), (std::vector<std::string>{"D1", "D2"}));
  EXPECT_EQ(SplitCuis(" -1 "), (std::vector<std::string>{"-1"}));
}

TEST(ParsePubtator, TypeFilterAndCollapse) {
  const std::string text =
      "d|t|Aspirin caused rash.\n"
      "d|a|\n"
      "d\t0\t7\tAspirin\tChemical\tC1\n"
      "d\t15\t19\trash\tDisease\tD1\n";
  LoadOptions keep;
  keep.keep_type = "Disease";
  const Corpus filtered = Pubtator(text, keep);
  ASSERT_EQ(filtered.documents[0].mentions.size(), 1u);
  EXPECT_EQ(filtered.documents[0].mentions[0].surface, "rash");
  EXPECT_TRUE(filtered.IsSingleType());

  LoadOptions collapse;
  collapse.collapse_type = "Entity";
  const Corpus collapsed = Pubtator(text, collapse);
  EXPECT_EQ(collapsed.documents[0].mentions.size(), 2u);
  EXPECT_EQ(collapsed.entity_types, (std::set<std::string>{"Entity"}));
}

TEST(ParseConll, CanonicalDecode) {
  const Corpus c = Conll("colorectal B-Disease\ncancer I-Disease\n. O\n");
  ASSERT_EQ(c.documents.size(), 1u);
  ASSERT_EQ(c.documents[0].mentions.size(), 1u);
  EXPECT_EQ(c.documents[0].mentions[0].surface, "colorectal cancer");
  EXPECT_TRUE(c.documents[0].mentions[0].HasOnlyUnknownCui());
}

TEST(ParseConll, StrayInsideRepairedOrRejected) {
  const std::string text = "cancer I-Disease\nhere O\n";
  const Corpus c = Conll(text, BioRepair::kRepair);
  ASSERT_EQ(c.documents[0].mentions.size(), 1u);
  EXPECT_EQ(c.documents[0].mentions[0].surface, "cancer");
  EXPECT_THROW(Conll(text, BioRepair::kStrict), ParseError);
}

TEST(ParseConll, ThirdColumnCarriesCuis) {
  const Corpus c = Conll("-DOCSTART- O\n\nlung B-Disease D1|D2\ncancer I-Disease\n\nok O\n");
  ASSERT_EQ(c.documents.size(), 1u);
  ASSERT_EQ(c.documents[0].mentions.size(), 1u);
  EXPECT_EQ(c.documents[0].mentions[0].cuis, (std::vector<std::string>{"D1", "D2"}));
  EXPECT_EQ(c.documents[0].text, "lung cancer\nok");
}

// serialize(parse(x)) re-parses to the same corpus.
TEST(FormatsProperty, JsonlRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Corpus c = testing::RandomCorpus(rng, 3, 25, 0.3);
    std::ostringstream out;
    WriteJsonl(out, c);
    std::istringstream in(out.str());
    const Corpus back = ReadJsonl(in);
    EXPECT_EQ(back.documents, c.documents);
    EXPECT_EQ(back.entity_types, c.entity_types);
    std::ostringstream again;
    WriteJsonl(again, back);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(FormatsProperty, PubtatorRoundTrip) {
  const std::string text =
      "11|t|\xc3\x89tude of Wilms' tumor.\n"
      "11|a|Tumor (WT) cases.\n"
      "11\t9\t21\tWilms' tumor\tDisease\tD009396\n"
      "11\t23\t28\tTumor\tDisease\tD009369|D1\n"
      "\n";
  const Corpus c = Pubtator(text);
  ASSERT_TRUE(c.issues.empty());
  std::ostringstream out;
  WritePubtator(out, c);
  const Corpus back = Pubtator(out.str());
  EXPECT_EQ(back.documents, c.documents);
}

TEST(CorpusInvariants, HoldAfterParsing) {
  std::mt19937_64 rng(9);
  const Corpus c = testing::RandomCorpus(rng, 5, 40, 0.25);
  EXPECT_TRUE(CheckInvariants(c).empty());
  EXPECT_GE(c.SentenceCount(), 1u);
}

}  // namespace
}  // namespace bioner
