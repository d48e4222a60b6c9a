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

#ifndef BIONER_PARTITION_H_
#define BIONER_PARTITION_H_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bioner/corpus.h"

namespace bioner {

enum class Split { kMem = 0, kSyn = 1, kCon = 2 };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kMem, Split::kSyn,
                                                    Split::kCon};

std::string_view ToString(Split split);  // "MEM", "SYN", "CON"
Split SplitFromString(std::string_view s);

enum class DatasetKind { kSingleType, kMultiType };

// Normalized training surfaces and training CUIs ("-1" excluded).
struct TrainSets {
  std::unordered_set<std::string> mentions;
  std::unordered_set<std::string> cuis;
};

TrainSets BuildTrainSets(const Corpus& train);

// Single-type when train and evaluation corpora together carry one type.
DatasetKind DatasetKindOf(const Corpus& train, const Corpus& eval);

struct SplitDecision {
  Split split = Split::kCon;
  // Rule id: unknown_cui, surface_hit+cui_hit, surface_hit+multi_cui_partial,
  // surface_hit+cui_miss:single_type, surface_hit+cui_miss:multi_type,
  // surface_miss+cui_hit, surface_miss+multi_cui_partial,
  // surface_miss+cui_miss.
  std::string reason;
};

// Rules in order: a mention whose only CUI is "-1" is CON; otherwise the
// normalized surface and CUI overlaps with the training sets decide. An
// empty normalized surface never matches.
SplitDecision AssignSplit(const Mention& mention, const TrainSets& train,
                          DatasetKind kind);

struct SplitAssignment {
  std::string doc_id;
  std::size_t mention_index = 0;  // into Document::mentions
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  Split split = Split::kCon;
  std::string reason;
};

struct SplitReport {
  std::string dataset;
  SplitRole role = SplitRole::kTest;
  std::array<std::size_t, 3> counts{};
  std::map<std::string, std::size_t> reason_counts;
  std::vector<SplitAssignment> assignments;  // document order

  std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
  std::size_t count(Split s) const {
    return counts[static_cast<std::size_t>(s)];
  }
  // Share of the three-split total, in percent.
  double Percent(Split s) const;
  // Lookup by (doc_id, mention index); nullptr when absent.
  const SplitAssignment* Find(std::string_view doc_id,
                              std::size_t mention_index) const;
};

SplitReport PartitionCorpus(const Corpus& eval, const TrainSets& train,
                            DatasetKind kind, int threads = 1);

// JSON with counts, percentages (one decimal), rule counts and per-mention
// assignments; the markdown table follows the dev/test x MEM/SYN/CON layout.
std::string SplitReportToJson(const SplitReport& report);
SplitReport SplitReportFromJson(std::string_view text);
std::string SplitReportMarkdown(const std::vector<SplitReport>& reports);

// Percent rounded to one decimal and rendered with one decimal digit.
std::string FormatPercent(double percent);

}  // namespace bioner

#endif  // BIONER_PARTITION_H_
