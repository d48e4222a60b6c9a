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

#ifndef BIONER_BIAS_H_
#define BIONER_BIAS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bioner/bio.h"
#include "bioner/corpus.h"

namespace bioner {

// Floor applied to every probability before it enters a logarithm.
inline constexpr double kProbabilityFloor = 1e-8;

struct TagDistribution {
  std::vector<double> probs;

  static TagDistribution Uniform(std::size_t k);
  std::size_t size() const { return probs.size(); }
  std::size_t Argmax() const;
  // Entries finite, non-negative and summing to one within `tolerance`.
  bool IsValid(double tolerance = 1e-9) const;
};

std::vector<double> Softmax(std::span<const double> logits);

// max(b_k, eps)^(1/T), renormalized. No temperature means exponent one, so
// only the floor and the renormalization apply.
std::vector<double> SmoothDistribution(std::span<const double> b,
                                       std::optional<double> temperature,
                                       double epsilon = kProbabilityFloor);

// Statistics-based biased model: for every training word, how often it
// carries each tag class. The distribution of a word is its class counts
// divided by its occurrence count; words never seen in training get the
// uniform distribution.
class BiasTable {
 public:
  explicit BiasTable(std::size_t num_classes = 3,
                     double epsilon = kProbabilityFloor);

  // Counts the token texts of every training sentence against their BIO
  // classes. Misaligned mentions are projected onto their covering tokens.
  static BiasTable Build(const Corpus& train, const TagScheme& scheme);

  void Observe(std::string_view word, std::size_t tag_class);

  std::size_t num_classes() const { return num_classes_; }
  double epsilon() const { return epsilon_; }
  std::optional<double> temperature() const { return temperature_; }
  std::size_t vocabulary_size() const { return counts_.size(); }
  std::uint64_t Total(std::string_view word) const;
  const std::vector<std::uint64_t>* Counts(std::string_view word) const;

  // Plain count ratio (no floor, no temperature).
  std::vector<double> RawDistribution(std::string_view word) const;
  // Floored, temperature-scaled and renormalized; uniform for unseen words.
  TagDistribution Distribution(std::string_view word) const;

  // Copy with the given temperature. Throws std::invalid_argument unless the
  // temperature is absent or positive.
  BiasTable Smooth(std::optional<double> temperature) const;

  // Sorted JSON lines {"word", "counts", "total"}.
  void Write(std::ostream& out) const;
  static BiasTable Read(std::istream& in, double epsilon = kProbabilityFloor);

  bool operator==(const BiasTable&) const = default;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::size_t num_classes_;
  double epsilon_;
  std::optional<double> temperature_;
  std::unordered_map<std::string, std::vector<std::uint64_t>, Hash,
                     std::equal_to<>>
      counts_;
};

// softmax(log p + log b) with both inputs floored at `epsilon`.
TagDistribution BiasProduct(const TagDistribution& p, const TagDistribution& b,
                            double epsilon = kProbabilityFloor);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // with respect to the logits
};

// Negative log-likelihood of `gold` under softmax(logits + log b). The bias
// is a constant, so the gradient is softmax(logits + log b) - onehot(gold).
// With uniform b this is ordinary cross-entropy.
LossAndGradient DebiasedNll(std::span<const double> logits,
                            const TagDistribution& bias, std::size_t gold,
                            double epsilon = kProbabilityFloor);

LossAndGradient Nll(std::span<const double> logits, std::size_t gold);

}  // namespace bioner

#endif  // BIONER_BIAS_H_
