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

#ifndef BIONER_EVAL_H_
#define BIONER_EVAL_H_

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioner/corpus.h"
#include "bioner/dictionary.h"
#include "bioner/partition.h"

namespace bioner {

// hits / total with the integer counts kept next to the percentage.
struct Ratio {
  std::size_t hits = 0;
  std::size_t total = 0;

  // Percentage, or nullopt when total is zero.
  std::optional<double> percent() const {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
  }
  bool operator==(const Ratio&) const = default;
};

struct RelaxedResult {
  std::string target;
  Ratio ratio;
  bool operator==(const RelaxedResult&) const = default;
};

struct EvalReport {
  std::string name;
  std::size_t true_positives = 0;  // predictions matching a gold mention
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t gold_hits = 0;  // gold mentions matched by some prediction
  // Percentages; precision is 0 without predictions.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<std::array<Ratio, 3>> per_split;  // indexed by Split
  std::optional<RelaxedResult> relaxed;
  std::map<std::string, Ratio> subsets;

  bool operator==(const EvalReport&) const = default;
};

// Entity-level scores with exact (span, type) matching. Per-split recall is
// filled when `splits` is given; precision is never split-specific. Throws
// when a prediction names a document missing from `gold`.
EvalReport Evaluate(const Corpus& gold, const std::vector<Prediction>& predictions,
                    const SplitReport* splits = nullptr);

enum class RelaxedMode {
  kRangeContainment,  // prediction range contains the occurrence range
  kSubstring,  // an overlapping prediction's text contains the target string
};

// Occurrences of `target` are found by exact, non-overlapping scan of every
// document text; an occurrence is recalled when a prediction in the same
// document contains it.
Ratio RelaxedRecall(const Corpus& corpus,
                    const std::vector<Prediction>& predictions,
                    std::string_view target,
                    RelaxedMode mode = RelaxedMode::kRangeContainment);

// Single whitespace-free token of 2-8 characters made of letters, digits and
// internal hyphens, with at least two uppercase letters.
bool IsAbbreviation(std::string_view surface);

// Normalized mention of two or more words whose last word is disease,
// syndrome, infection, cancer or tumor, or one of their plurals.
bool HasNameRegularity(std::string_view surface);

using MentionPredicate = std::function<bool(const Mention&)>;

// Named predicate: "abbreviation", "name_regularity", or "surfaces:<path>"
// (one surface per line, matched exactly).
MentionPredicate MakeSubsetPredicate(std::string_view spec);

// Exact-match recall over the gold mentions accepted by `predicate`,
// optionally restricted to one split. An empty subset yields total == 0.
Ratio SubsetRecall(const Corpus& gold, const std::vector<Prediction>& predictions,
                   const MentionPredicate& predicate,
                   const SplitReport* splits = nullptr,
                   std::optional<Split> only = std::nullopt);

std::string EvalReportToJson(const EvalReport& report);
EvalReport EvalReportFromJson(std::string_view text);

// Rows P, R, F1, MEM, SYN, CON, then relaxed target and subsets; one column
// per report.
std::string ComparisonMarkdown(const std::vector<EvalReport>& reports);

// Predictions as JSON lines {"doc_id", "start", "end", "type"}.
void WritePredictions(std::ostream& out, const std::vector<Prediction>& preds);
std::vector<Prediction> ReadPredictions(std::istream& in);

}  // namespace bioner

#endif  // BIONER_EVAL_H_
