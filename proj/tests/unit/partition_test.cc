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

#include "bioner/partition.h"
#include "../partition_oracle.h"
#include "../test_util.h"

namespace bioner {
namespace {

using testing::MakeCorpus;
using testing::MakeDocument;

Mention M(const std::string& surface, std::vector<std::string> cuis) {
  Mention m;
  m.surface = surface;
  m.end = surface.size();
  m.cuis = std::move(cuis);
  m.type = "Disease";
  return m;
}

Corpus CancerTrain() {
  return MakeCorpus({MakeDocument(
      "t", "cancer and tumor",
      {{.surface = "cancer", .cuis = {"D009369"}},
       {.surface = "tumor", .cuis = {"D009369", "-1"}}})});
}

TEST(BuildTrainSets, CollectsNormalizedSurfacesAndKnownCuis) {
  const TrainSets ts = BuildTrainSets(CancerTrain());
  EXPECT_EQ(ts.mentions, (std::unordered_set<std::string>{"cancer", "tumor"}));
  EXPECT_EQ(ts.cuis, (std::unordered_set<std::string>{"D009369"}));
}

TEST(BuildTrainSets, RejectsNonTrainRole) {
  Corpus c = CancerTrain();
  c.role = SplitRole::kTest;
  EXPECT_THROW(BuildTrainSets(c), Error);
}

TEST(AssignSplit, Rules) {
  const TrainSets ts = BuildTrainSets(CancerTrain());
  const auto single = DatasetKind::kSingleType;
  const auto multi = DatasetKind::kMultiType;
  EXPECT_EQ(AssignSplit(M("Cancer", {"D009369"}), ts, single).split, Split::kMem);
  EXPECT_EQ(AssignSplit(M("neoplasm", {"D009369", "D777"}), ts, single).split,
            Split::kSyn);
  EXPECT_EQ(AssignSplit(M("neoplasm", {"-1"}), ts, single).split, Split::kCon);
  EXPECT_EQ(AssignSplit(M("cancer", {"-1"}), ts, single).split, Split::kCon);
  EXPECT_EQ(AssignSplit(M("cancer", {"D777"}), ts, multi).split, Split::kCon);
  EXPECT_EQ(AssignSplit(M("cancer", {"D777"}), ts, single).split, Split::kMem);
  EXPECT_EQ(AssignSplit(M("neoplasm", {"D777"}), ts, single).split, Split::kCon);
}

TEST(AssignSplit, ReasonIdsAreReported) {
  const TrainSets ts = BuildTrainSets(CancerTrain());
  EXPECT_EQ(AssignSplit(M("x", {"-1"}), ts, DatasetKind::kSingleType).reason,
            "unknown_cui");
  EXPECT_FALSE(
      AssignSplit(M("cancer", {"D009369"}), ts, DatasetKind::kSingleType).reason.empty());
}

TEST(PartitionCorpus, SelfOverlapIsAllMemorized) {
  std::mt19937_64 rng(2);
  Corpus train = testing::RandomCorpus(rng, 4, 30, 0.3);
  // Unknown-CUI mentions are CON by rule, so give every mention a concept.
  for (Document& doc : train.documents) {
    for (Mention& m : doc.mentions) m.cuis = {"D" + m.surface};
  }
  Corpus eval = train;
  eval.role = SplitRole::kTest;
  const SplitReport r = PartitionCorpus(eval, BuildTrainSets(train),
                                        DatasetKind::kSingleType);
  EXPECT_EQ(r.count(Split::kMem), eval.MentionCount());
  EXPECT_DOUBLE_EQ(r.Percent(Split::kMem), 100.0);
}

TEST(PartitionCorpus, ExhaustiveAndThreadIndependent) {
  std::mt19937_64 rng(4);
  const Corpus train = testing::RandomCorpus(rng, 6, 40, 0.3);
  const Corpus eval = testing::RandomCorpus(rng, 9, 40, 0.3, SplitRole::kTest);
  const TrainSets ts = BuildTrainSets(train);
  const SplitReport one = PartitionCorpus(eval, ts, DatasetKind::kSingleType, 1);
  const SplitReport four = PartitionCorpus(eval, ts, DatasetKind::kSingleType, 4);
  EXPECT_EQ(one.total(), eval.MentionCount());
  EXPECT_EQ(one.assignments.size(), eval.MentionCount());
  EXPECT_EQ(SplitReportToJson(one), SplitReportToJson(four));
}

TEST(PartitionProperty, BruteForceOracleAgrees) {
  const auto r = testing::RunPartitionOracle(300, 17);
  EXPECT_GT(r.mentions, 1000u);
  EXPECT_EQ(r.disagreements, 0u) << r.first_disagreement;
}

// Adding training mentions never moves MEM out of MEM; adding CUIs never
// moves SYN to CON.
TEST(PartitionProperty, Monotonicity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Corpus train = testing::RandomCorpus(rng, 2, 20, 0.4, SplitRole::kTrain, 8, 6);
    const Corpus extra = testing::RandomCorpus(rng, 1, 15, 0.4, SplitRole::kTrain, 8, 6);
    const Corpus eval = testing::RandomCorpus(rng, 2, 20, 0.4, SplitRole::kTest, 8, 6);
    Corpus bigger = train;
    for (Document doc : extra.documents) {
      doc.id = "extra-" + doc.id;
      bigger.documents.push_back(std::move(doc));
    }
    const auto kind = DatasetKind::kSingleType;
    const SplitReport before = PartitionCorpus(eval, BuildTrainSets(train), kind);
    const SplitReport after = PartitionCorpus(eval, BuildTrainSets(bigger), kind);
    for (std::size_t i = 0; i < before.assignments.size(); ++i) {
      const Split b = before.assignments[i].split;
      const Split a = after.assignments[i].split;
      if (b == Split::kMem) {
        EXPECT_EQ(a, Split::kMem);
      }
      if (b == Split::kSyn) {
        EXPECT_NE(a, Split::kCon);
      }
    }
  }
}

TEST(SplitReport, JsonRoundTripAndPercentages) {
  std::mt19937_64 rng(8);
  const Corpus train = testing::RandomCorpus(rng, 3, 30, 0.3);
  const Corpus eval = testing::RandomCorpus(rng, 3, 30, 0.3, SplitRole::kDev);
  SplitReport r = PartitionCorpus(eval, BuildTrainSets(train), DatasetKind::kSingleType);
  r.dataset = "toy";
  const std::string json = SplitReportToJson(r);
  EXPECT_EQ(SplitReportToJson(SplitReportFromJson(json)), json);
  double sum = 0;
  for (Split s : kAllSplits) sum += r.Percent(s);
  EXPECT_NEAR(sum, 100.0, 1e-9);
}

TEST(FormatPercent, OneDecimal) {
  EXPECT_EQ(FormatPercent(100.0 * 515 / 787), "65.4");
  EXPECT_EQ(FormatPercent(100.0 * 191 / 787), "24.3");
  EXPECT_EQ(FormatPercent(100.0 * 81 / 787), "10.3");
  EXPECT_EQ(FormatPercent(0.0), "0.0");
}

TEST(SplitReportMarkdown, HasDatasetRow) {
  SplitReport r;
  r.dataset = "NCBI";
  r.counts = {515, 191, 81};
  const std::string md = SplitReportMarkdown({r});
  EXPECT_NE(md.find("NCBI"), std::string::npos);
  EXPECT_NE(md.find("515 (65.4%)"), std::string::npos);
}

}  // namespace
}  // namespace bioner
