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

#ifndef BIONER_TESTS_DEBIAS_HARNESS_H_
#define BIONER_TESTS_DEBIAS_HARNESS_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "bioner/bias.h"
#include "bioner/eval.h"
#include "bioner/experiments.h"
#include "bioner/partition.h"
#include "bioner/tagger.h"

namespace bioner::testing {

// Test-set recalls of one plain and one debiased tagger trained on the same
// synthetic corpus. `shifted` is recall over SYN and CON together, which
// holds exactly the planted "modifier + word" mentions.
struct PairedRun {
  std::uint64_t seed = 0;
  double plain_shifted = 0;
  double debias_shifted = 0;
  double plain_mem = 0;
  double debias_mem = 0;
  double plain_f1 = 0;
  double debias_f1 = 0;

  double shifted_gain() const { return debias_shifted - plain_shifted; }
  double mem_change() const { return debias_mem - plain_mem; }
};

inline PairedRun RunDebiasPair(const BiasedCorpusConfig& config, std::uint64_t seed,
                               std::optional<double> temperature = std::nullopt,
                               int threads = 1) {
  const BiasedCorpus bc = MakeBiasedCorpus(config, seed);
  const BiasTable table = BiasTable::Build(bc.train, TagScheme(bc.train.entity_types));
  TaggerConfig tc;
  tc.seed = seed;
  tc.threads = threads;
  const TaggerModel plain = Train(bc.train, nullptr, tc);
  tc.debias = true;
  tc.temperature = temperature;
  const TaggerModel debias = Train(bc.train, &table, tc);
  const SplitReport splits = PartitionCorpus(bc.test, BuildTrainSets(bc.train),
                                             DatasetKindOf(bc.train, bc.test));
  auto score = [&](const TaggerModel& m, double& shifted, double& mem, double& f1) {
    const EvalReport r = Evaluate(bc.test, PredictCorpus(m, bc.test, threads), &splits);
    const auto& s = *r.per_split;
    const Ratio sc{s[1].hits + s[2].hits, s[1].total + s[2].total};
    shifted = sc.percent().value_or(0.0);
    mem = s[0].percent().value_or(0.0);
    f1 = r.f1;
  };
  PairedRun run;
  run.seed = seed;
  score(plain, run.plain_shifted, run.plain_mem, run.plain_f1);
  score(debias, run.debias_shifted, run.debias_mem, run.debias_f1);
  return run;
}

inline double Mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double SampleStdDev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = Mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace bioner::testing

#endif  // BIONER_TESTS_DEBIAS_HARNESS_H_
