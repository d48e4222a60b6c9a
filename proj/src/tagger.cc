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

#include "bioner/tagger.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include "json.hpp"
#include "bioner/hash.h"
#include "bioner/parallel.h"
#include "bioner/text.h"

namespace bioner {

namespace {

std::uint32_t HashFeature(std::string_view name, int hash_bits) {
  return static_cast<std::uint32_t>(Fnv1a64(name) &
                                    ((std::uint64_t{1} << hash_bits) - 1));
}

bool AllPunct(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return IsAsciiPunct(static_cast<unsigned char>(c));
  });
}

}  // namespace

std::string WordShape(std::string_view word) {
  std::string shape;
  for (char ch : word) {
    const auto c = static_cast<unsigned char>(ch);
    char s = ch;
    if (c >= 'A' && c <= 'Z') {
      s = 'X';
    } else if (c >= 'a' && c <= 'z') {
      s = 'x';
    } else if (c >= '0' && c <= '9') {
      s = 'd';
    } else if (c >= 0x80) {
      s = 'u';
    }
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

std::vector<std::uint32_t> TokenFeatures(const std::vector<Token>& tokens,
                                         std::size_t i, int hash_bits) {
  const std::string& w = tokens[i].text;
  std::vector<std::string> names;
  names.reserve(14);
  names.push_back("bias");
  names.push_back("w=" + w);
  names.push_back("lw=" + AsciiLower(w));
  if (w.size() >= 3) {
    names.push_back("p3=" + w.substr(0, 3));
    names.push_back("s3=" + w.substr(w.size() - 3));
  }
  if (w.size() >= 4) {
    names.push_back("p4=" + w.substr(0, 4));
    names.push_back("s4=" + w.substr(w.size() - 4));
  }
  names.push_back("shape=" + WordShape(w));
  if (AllPunct(w)) names.push_back("punct");
  for (int offset : {-2, -1, 1, 2}) {
    const auto j = static_cast<std::ptrdiff_t>(i) + offset;
    std::string ctx;
    if (j < 0) {
      ctx = "<s>";
    } else if (j >= static_cast<std::ptrdiff_t>(tokens.size())) {
      ctx = "</s>";
    } else {
      ctx = tokens[static_cast<std::size_t>(j)].text;
    }
    names.push_back("w[" + std::to_string(offset) + "]=" + ctx);
  }
  std::vector<std::uint32_t> ids;
  ids.reserve(names.size());
  for (const std::string& n : names) ids.push_back(HashFeature(n, hash_bits));
  return ids;
}

TaggerModel::TaggerModel(TagScheme scheme, TaggerConfig config)
    : scheme_(std::move(scheme)), config_(std::move(config)) {
  if (config_.hash_bits < 4 || config_.hash_bits > 26) {
    throw Error("hash_bits must be within [4, 26]");
  }
  weights_.assign(num_features() * num_classes(), 0.0);
}

std::vector<double> TaggerModel::Logits(
    const std::vector<std::uint32_t>& features) const {
  const std::size_t k_count = num_classes();
  std::vector<double> z(k_count, 0.0);
  for (std::uint32_t f : features) {
    const double* row = &weights_[static_cast<std::size_t>(f) * k_count];
    for (std::size_t k = 0; k < k_count; ++k) z[k] += row[k];
  }
  for (double& v : z) v *= scale_;
  return z;
}

std::vector<double> TaggerModel::Weights() const {
  std::vector<double> out(weights_);
  for (double& w : out) w *= scale_;
  return out;
}

void TaggerModel::Save(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = "bioner-tagger";
  j["version"] = 1;
  j["labels"] = scheme_.labels();
  j["types"] = scheme_.types();
  nlohmann::ordered_json c;
  c["learning_rate"] = config_.learning_rate;
  c["epochs"] = config_.epochs;
  c["l2"] = config_.l2;
  c["batch_size"] = config_.batch_size;
  c["seed"] = config_.seed;
  c["debias"] = config_.debias;
  if (config_.temperature) {
    c["temperature"] = *config_.temperature;
  } else {
    c["temperature"] = nullptr;
  }
  c["hash_bits"] = config_.hash_bits;
  c["feature_hash"] = "fnv1a64";
  j["config"] = std::move(c);
  j["loss_history"] = loss_history_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::size_t k_count = num_classes();
  for (std::size_t f = 0; f < num_features(); ++f) {
    bool nonzero = false;
    for (std::size_t k = 0; k < k_count; ++k) {
      nonzero = nonzero || weights_[f * k_count + k] != 0.0;
    }
    if (!nonzero) continue;
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    row.push_back(f);
    for (std::size_t k = 0; k < k_count; ++k) {
      row.push_back(weight(static_cast<std::uint32_t>(f), k));
    }
    rows.push_back(std::move(row));
  }
  j["weights"] = std::move(rows);
  out << j.dump() << '\n';
}

TaggerModel TaggerModel::Load(std::istream& in) {
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != "bioner-tagger" || j.at("version") != 1) {
      throw ParseError("not a version 1 tagger checkpoint");
    }
    const auto types = j.at("types").get<std::set<std::string>>();
    const auto& c = j.at("config");
    TaggerConfig config;
    config.learning_rate = c.at("learning_rate").get<double>();
    config.epochs = c.at("epochs").get<int>();
    config.l2 = c.at("l2").get<double>();
    config.batch_size = c.at("batch_size").get<int>();
    config.seed = c.at("seed").get<std::uint64_t>();
    config.debias = c.at("debias").get<bool>();
    if (!c.at("temperature").is_null()) {
      config.temperature = c.at("temperature").get<double>();
    }
    config.hash_bits = c.at("hash_bits").get<int>();
    TaggerModel model(TagScheme(types), config);
    if (model.scheme_.labels() !=
        j.at("labels").get<std::vector<std::string>>()) {
      throw ParseError("checkpoint labels do not match its types");
    }
    model.loss_history_ = j.at("loss_history").get<std::vector<double>>();
    const std::size_t k_count = model.num_classes();
    for (const auto& row : j.at("weights")) {
      const auto f = row.at(0).get<std::size_t>();
      if (f >= model.num_features() || row.size() != k_count + 1) {
        throw ParseError("malformed weight row");
      }
      for (std::size_t k = 0; k < k_count; ++k) {
        model.weights_[f * k_count + k] = row.at(k + 1).get<double>();
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid tagger checkpoint: ") + e.what());
  }
}

std::vector<std::vector<TrainingToken>> PrepareTrainingData(
    const Corpus& corpus, const TagScheme& scheme, const BiasTable* bias,
    int hash_bits) {
  if (bias != nullptr && bias->num_classes() != scheme.size()) {
    throw Error("bias table class count does not match the tag scheme");
  }
  std::vector<std::vector<TrainingToken>> data;
  const TagDistribution uniform = TagDistribution::Uniform(scheme.size());
  for (const Document& doc : corpus.documents) {
    for (const Sentence& s : doc.sentences) {
      const TagSequence tags =
          ToBio(doc, s, BioOptions{.project_misaligned = true});
      std::vector<TrainingToken> sentence;
      sentence.reserve(s.tokens.size());
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        TrainingToken t;
        t.features = TokenFeatures(s.tokens, i, hash_bits);
        const auto gold = scheme.Find(tags[i]);
        if (!gold) throw Error("tag '" + tags[i] + "' not in tag scheme");
        t.gold = *gold;
        t.bias = bias == nullptr ? uniform : bias->Distribution(s.tokens[i].text);
        sentence.push_back(std::move(t));
      }
      data.push_back(std::move(sentence));
    }
  }
  return data;
}

namespace {

struct SentenceGradient {
  double loss = 0.0;
  // (feature, gradient over classes) per token feature occurrence.
  std::vector<std::pair<std::uint32_t, std::vector<double>>> terms;
};

SentenceGradient SentenceLoss(const TaggerModel& model,
                              const std::vector<TrainingToken>& sentence) {
  SentenceGradient out;
  for (const TrainingToken& t : sentence) {
    const std::vector<double> z = model.Logits(t.features);
    LossAndGradient lg = DebiasedNll(z, t.bias, t.gold);
    out.loss += lg.loss;
    for (std::uint32_t f : t.features) out.terms.emplace_back(f, lg.gradient);
  }
  return out;
}

}  // namespace

BatchGradient ComputeBatchGradient(
    const TaggerModel& model,
    const std::vector<const std::vector<TrainingToken>*>& batch) {
  std::map<std::uint32_t, std::vector<double>> acc;
  BatchGradient out;
  for (const auto* sentence : batch) {
    SentenceGradient g = SentenceLoss(model, *sentence);
    out.loss += g.loss;
    out.tokens += sentence->size();
    for (auto& [f, grad] : g.terms) {
      auto& row = acc[f];
      if (row.empty()) row.assign(grad.size(), 0.0);
      for (std::size_t k = 0; k < grad.size(); ++k) row[k] += grad[k];
    }
  }
  for (auto& [f, row] : acc) {
    out.features.push_back(f);
    out.gradients.push_back(std::move(row));
  }
  return out;
}

TaggerModel Train(const Corpus& corpus, const BiasTable* bias,
                  const TaggerConfig& config) {
  if (config.epochs < 0 || config.batch_size < 1 ||
      !(config.learning_rate > 0.0) || config.l2 < 0.0) {
    throw Error("invalid training configuration");
  }
  std::optional<BiasTable> smoothed;
  const BiasTable* active = nullptr;
  if (config.debias) {
    if (bias == nullptr) throw Error("debiasing requested without a bias table");
    smoothed = bias->Smooth(config.temperature);
    active = &*smoothed;
  }
  std::set<std::string> types = corpus.entity_types;
  TaggerModel model(TagScheme(types), config);
  const auto data = PrepareTrainingData(corpus, model.scheme(), active,
                                        config.hash_bits);
  if (data.empty()) throw Error("training corpus has no sentences");

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  const std::size_t k_count = model.num_classes();
  const double lr = config.learning_rate;
  const double decay = 1.0 - lr * config.l2;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const TaggerModel checkpoint = model;
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Fisher-Yates with a fixed reduction of the raw 64-bit draws, so the
    // permutation does not depend on the standard library's distributions.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }

    double epoch_loss = 0.0;
    std::size_t epoch_tokens = 0;
    const auto batch_size = static_cast<std::size_t>(config.batch_size);
    for (std::size_t b = 0; b < order.size(); b += batch_size) {
      const std::size_t e = std::min(order.size(), b + batch_size);
      std::vector<SentenceGradient> grads(e - b);
      ParallelFor(e - b, config.threads, [&](std::size_t i) {
        grads[i] = SentenceLoss(model, data[order[b + i]]);
      });
      std::size_t n_tokens = 0;
      for (std::size_t i = b; i < e; ++i) n_tokens += data[order[i]].size();
      if (n_tokens == 0) continue;

      // L2 shrinkage folded into the global scale.
      model.scale_ *= decay;
      const double step = lr / static_cast<double>(n_tokens) / model.scale_;
      for (const SentenceGradient& g : grads) {
        epoch_loss += g.loss;
        for (const auto& [f, grad] : g.terms) {
          double* row = &model.weights_[static_cast<std::size_t>(f) * k_count];
          for (std::size_t k = 0; k < k_count; ++k) row[k] -= step * grad[k];
        }
      }
      epoch_tokens += n_tokens;
      if (model.scale_ < 1e-6) {
        for (double& w : model.weights_) w *= model.scale_;
        model.scale_ = 1.0;
      }
    }
    const double mean = epoch_loss / static_cast<double>(std::max<std::size_t>(1, epoch_tokens));
    if (!std::isfinite(mean)) {
      throw TrainingDiverged("training loss is not finite at epoch " +
                                 std::to_string(epoch + 1),
                             checkpoint);
    }
    model.loss_history_.push_back(mean);
  }
  // Fold the scale so saved and reloaded models compare equal.
  for (double& w : model.weights_) w *= model.scale_;
  model.scale_ = 1.0;
  return model;
}

TaggedSentence Predict(const TaggerModel& model, const Document& doc,
                       const Sentence& sentence) {
  TaggedSentence out;
  out.tags.reserve(sentence.tokens.size());
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto features =
        TokenFeatures(sentence.tokens, i, model.config().hash_bits);
    TagDistribution p{Softmax(model.Logits(features))};
    out.tags.push_back(model.scheme().label(p.Argmax()));
    out.distributions.push_back(std::move(p));
  }
  RepairBio(out.tags);
  out.mentions = FromBio(doc.text, sentence.tokens, out.tags);
  return out;
}

std::vector<Prediction> PredictCorpus(const TaggerModel& model,
                                      const Corpus& corpus, int threads) {
  std::vector<std::vector<Prediction>> per_doc(corpus.documents.size());
  ParallelFor(corpus.documents.size(), threads, [&](std::size_t d) {
    const Document& doc = corpus.documents[d];
    for (const Sentence& s : doc.sentences) {
      for (const Mention& m : Predict(model, doc, s).mentions) {
        per_doc[d].push_back({doc.id, m.start, m.end, m.type});
      }
    }
  });
  std::vector<Prediction> out;
  for (auto& p : per_doc) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace bioner
