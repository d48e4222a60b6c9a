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

#include "bioner/bias.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace bioner {

TagDistribution TagDistribution::Uniform(std::size_t k) {
  return {std::vector<double>(k, 1.0 / static_cast<double>(k))};
}

std::size_t TagDistribution::Argmax() const {
  return static_cast<std::size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

bool TagDistribution::IsValid(double tolerance) const {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) return false;
    sum += p;
  }
  return !probs.empty() && std::abs(sum - 1.0) <= tolerance;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> SmoothDistribution(std::span<const double> b,
                                       std::optional<double> temperature,
                                       double epsilon) {
  if (temperature && !(*temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  const double inv_t = temperature ? 1.0 / *temperature : 1.0;
  // Power-then-normalize in log space: exp(log(max(b, eps)) / T).
  std::vector<double> logs(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    logs[k] = std::log(std::max(b[k], epsilon)) * inv_t;
  }
  return Softmax(logs);
}

BiasTable::BiasTable(std::size_t num_classes, double epsilon)
    : num_classes_(num_classes), epsilon_(epsilon) {
  if (num_classes_ == 0) throw Error("bias table needs at least one class");
}

BiasTable BiasTable::Build(const Corpus& train, const TagScheme& scheme) {
  BiasTable table(scheme.size());
  std::size_t observed = 0;
  for (const Document& doc : train.documents) {
    for (const Sentence& s : doc.sentences) {
      const TagSequence tags =
          ToBio(doc, s, BioOptions{.project_misaligned = true});
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const auto k = scheme.Find(tags[i]);
        if (!k) throw Error("tag '" + tags[i] + "' not in tag scheme");
        table.Observe(s.tokens[i].text, *k);
        ++observed;
      }
    }
  }
  if (observed == 0) throw Error("cannot build a bias table from an empty corpus");
  return table;
}

void BiasTable::Observe(std::string_view word, std::size_t tag_class) {
  if (tag_class >= num_classes_) throw Error("tag class out of range");
  auto it = counts_.find(word);
  if (it == counts_.end()) {
    it = counts_
             .emplace(std::string(word),
                      std::vector<std::uint64_t>(num_classes_, 0))
             .first;
  }
  ++it->second[tag_class];
}

const std::vector<std::uint64_t>* BiasTable::Counts(
    std::string_view word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? nullptr : &it->second;
}

std::uint64_t BiasTable::Total(std::string_view word) const {
  const auto* c = Counts(word);
  return c == nullptr ? 0 : std::accumulate(c->begin(), c->end(),
                                            std::uint64_t{0});
}

std::vector<double> BiasTable::RawDistribution(std::string_view word) const {
  const auto* c = Counts(word);
  if (c == nullptr) return TagDistribution::Uniform(num_classes_).probs;
  const double total = static_cast<double>(Total(word));
  std::vector<double> out(num_classes_);
  for (std::size_t k = 0; k < num_classes_; ++k) {
    out[k] = static_cast<double>((*c)[k]) / total;
  }
  return out;
}

TagDistribution BiasTable::Distribution(std::string_view word) const {
  if (Counts(word) == nullptr) return TagDistribution::Uniform(num_classes_);
  return {SmoothDistribution(RawDistribution(word), temperature_, epsilon_)};
}

BiasTable BiasTable::Smooth(std::optional<double> temperature) const {
  if (temperature && !(*temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  BiasTable out = *this;
  out.temperature_ = temperature;
  return out;
}

void BiasTable::Write(std::ostream& out) const {
  std::vector<const std::string*> words;
  words.reserve(counts_.size());
  for (const auto& [w, c] : counts_) words.push_back(&w);
  std::sort(words.begin(), words.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const std::string* w : words) {
    nlohmann::ordered_json j;
    j["word"] = *w;
    j["counts"] = counts_.at(*w);
    j["total"] = Total(*w);
    out << j.dump() << '\n';
  }
}

BiasTable BiasTable::Read(std::istream& in, double epsilon) {
  std::string line;
  std::optional<BiasTable> table;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
      const auto total = j.at("total").get<std::uint64_t>();
      if (!table) table.emplace(counts.size(), epsilon);
      if (counts.size() != table->num_classes_ ||
          std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) !=
              total) {
        throw ParseError("bias table line " + std::to_string(line_no) +
                         ": inconsistent counts");
      }
      table->counts_.emplace(j.at("word").get<std::string>(),
                             std::move(counts));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("bias table line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  if (!table) throw ParseError("empty bias table");
  return *table;
}

TagDistribution BiasProduct(const TagDistribution& p, const TagDistribution& b,
                            double epsilon) {
  if (p.size() != b.size()) throw Error("distribution sizes differ");
  std::vector<double> logits(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    logits[k] = std::log(std::max(p.probs[k], epsilon)) +
                std::log(std::max(b.probs[k], epsilon));
  }
  return {Softmax(logits)};
}

LossAndGradient DebiasedNll(std::span<const double> logits,
                            const TagDistribution& bias, std::size_t gold,
                            double epsilon) {
  if (logits.size() != bias.size()) throw Error("distribution sizes differ");
  if (gold >= logits.size()) throw Error("gold class out of range");
  std::vector<double> combined(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    combined[k] = logits[k] + std::log(std::max(bias.probs[k], epsilon));
  }
  const double top = *std::max_element(combined.begin(), combined.end());
  double sum = 0.0;
  for (double v : combined) sum += std::exp(v - top);
  const double log_z = top + std::log(sum);

  LossAndGradient out;
  out.loss = log_z - combined[gold];
  out.gradient.resize(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out.gradient[k] = std::exp(combined[k] - log_z) - (k == gold ? 1.0 : 0.0);
  }
  return out;
}

LossAndGradient Nll(std::span<const double> logits, std::size_t gold) {
  return DebiasedNll(logits, TagDistribution::Uniform(logits.size()), gold);
}

}  // namespace bioner
