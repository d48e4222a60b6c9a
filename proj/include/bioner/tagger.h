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

#ifndef BIONER_TAGGER_H_
#define BIONER_TAGGER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bioner/bias.h"
#include "bioner/bio.h"
#include "bioner/corpus.h"
#include "bioner/dictionary.h"

namespace bioner {

struct TaggerConfig {
  double learning_rate = 0.5;
  int epochs = 15;
  double l2 = 1e-6;
  int batch_size = 16;  // sentences per update
  std::uint64_t seed = 1;
  bool debias = false;
  std::optional<double> temperature;
  int hash_bits = 18;
  int threads = 1;  // never changes results

  bool operator==(const TaggerConfig&) const = default;
};

// Hashed sparse features of token `i`: identity, lowercase, 3/4-character
// prefixes and suffixes, collapsed word shape, all-punctuation flag, the
// identities of the two tokens on either side, and a bias feature.
std::vector<std::uint32_t> TokenFeatures(const std::vector<Token>& tokens,
                                         std::size_t i, int hash_bits);

std::string WordShape(std::string_view word);

class TaggerModel {
 public:
  TaggerModel() = default;
  TaggerModel(TagScheme scheme, TaggerConfig config);

  const TagScheme& scheme() const { return scheme_; }
  const TaggerConfig& config() const { return config_; }
  std::size_t num_classes() const { return scheme_.size(); }
  std::size_t num_features() const { return std::size_t{1} << config_.hash_bits; }

  // Effective weight (scale folded in).
  double weight(std::uint32_t feature, std::size_t k) const {
    return scale_ * weights_[feature * num_classes() + k];
  }
  std::vector<double> Logits(const std::vector<std::uint32_t>& features) const;
  // Mean training loss per epoch, in order.
  const std::vector<double>& loss_history() const { return loss_history_; }

  // Dense copy of the effective weights.
  std::vector<double> Weights() const;
  void SetWeight(std::uint32_t feature, std::size_t k, double value) {
    weights_[feature * num_classes() + k] = value / scale_;
  }

  void Save(std::ostream& out) const;
  static TaggerModel Load(std::istream& in);

  bool operator==(const TaggerModel&) const = default;

 private:
  friend TaggerModel Train(const Corpus& corpus, const BiasTable* bias,
                           const TaggerConfig& config);
  TagScheme scheme_;
  TaggerConfig config_;
  std::vector<double> weights_;
  double scale_ = 1.0;
  std::vector<double> loss_history_;
};

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, TaggerModel last_finite)
      : Error(what), last_finite_(std::move(last_finite)) {}
  const TaggerModel& last_finite() const { return last_finite_; }

 private:
  TaggerModel last_finite_;
};

// One training token with everything the loss needs precomputed.
struct TrainingToken {
  std::vector<std::uint32_t> features;
  std::size_t gold = 0;
  TagDistribution bias;  // uniform when debiasing is off
};

std::vector<std::vector<TrainingToken>> PrepareTrainingData(
    const Corpus& corpus, const TagScheme& scheme, const BiasTable* bias,
    int hash_bits);

// Summed per-token loss of a batch and its gradient as (feature, class)
// pairs accumulated densely over the touched features.
struct BatchGradient {
  double loss = 0.0;
  std::size_t tokens = 0;
  std::vector<std::uint32_t> features;         // distinct, ascending
  std::vector<std::vector<double>> gradients;  // per feature, length K
};

BatchGradient ComputeBatchGradient(
    const TaggerModel& model,
    const std::vector<const std::vector<TrainingToken>*>& batch);

// Trains on the corpus. With `bias` (and config.debias) every token's loss
// is the debiased NLL against the bias table's distribution for its word;
// the table itself is never modified. Deterministic for a given seed and
// independent of config.threads.
TaggerModel Train(const Corpus& corpus, const BiasTable* bias,
                  const TaggerConfig& config);

struct TaggedSentence {
  TagSequence tags;
  std::vector<TagDistribution> distributions;
  std::vector<Mention> mentions;
};

// Greedy per-token argmax of the model's own distribution, BIO repair, then
// decoding. No bias table is involved.
TaggedSentence Predict(const TaggerModel& model, const Document& doc,
                       const Sentence& sentence);

std::vector<Prediction> PredictCorpus(const TaggerModel& model,
                                      const Corpus& corpus, int threads = 1);

}  // namespace bioner

#endif  // BIONER_TAGGER_H_
