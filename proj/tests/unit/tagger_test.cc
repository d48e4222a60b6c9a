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

#include <cmath>
#include <random>
#include <sstream>

#include "bioner/bias.h"
#include "bioner/tagger.h"
#include "bioner/text.h"
#include "../test_util.h"

namespace bioner {
namespace {

// Mention-initial, mention-internal and filler words come from disjoint
// vocabularies and mentions are never adjacent, so word identity separates
// the classes.
Corpus SeparableCorpus(std::size_t sentences, std::uint64_t seed,
                       SplitRole role = SplitRole::kTrain) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  for (std::size_t s = 0; s < sentences; ++s) {
    if (s % 10 == 0) {
      docs.emplace_back();
      docs.back().id = "doc" + std::to_string(s / 10);
    }
    Document& doc = docs.back();
    if (!doc.text.empty()) doc.text += "\n";
    const std::size_t words = 4 + rng() % 6;
    for (std::size_t w = 0; w < words; ++w) {
      if (rng() % 4 == 0 && w + 1 < words) {
        const std::size_t start = doc.text.size();
        doc.text += "ent" + std::to_string(rng() % 20) + " ";
        if (rng() % 2 == 0) doc.text += "ity" + std::to_string(rng() % 10) + " ";
        Mention m;
        m.start = start;
        m.end = doc.text.size() - 1;
        m.surface = doc.text.substr(start, m.end - start);
        m.cuis = {"D1"};
        m.type = "Disease";
        doc.mentions.push_back(std::move(m));
        doc.text += "fill" + std::to_string(rng() % 50) + " ";
        ++w;
      } else {
        doc.text += "fill" + std::to_string(rng() % 50) + " ";
      }
    }
    doc.text += ".";
  }
  return testing::MakeCorpus(std::move(docs), role);
}

double TokenAccuracy(const TaggerModel& model, const Corpus& corpus) {
  std::size_t right = 0;
  std::size_t total = 0;
  for (const Document& doc : corpus.documents) {
    for (const Sentence& s : doc.sentences) {
      const TagSequence gold = ToBio(doc, s);
      const TaggedSentence pred = Predict(model, doc, s);
      for (std::size_t i = 0; i < gold.size(); ++i) {
        right += gold[i] == pred.tags[i];
        ++total;
      }
    }
  }
  return static_cast<double>(right) / static_cast<double>(total);
}

TaggerConfig FastConfig() {
  TaggerConfig c;
  c.epochs = 8;
  c.hash_bits = 16;
  return c;
}

TEST(Tagger, FitsSeparableCorpus) {
  const Corpus train = SeparableCorpus(200, 1);
  const TaggerModel model = Train(train, nullptr, FastConfig());
  EXPECT_GE(TokenAccuracy(model, train), 0.99);
  ASSERT_GE(model.loss_history().size(), 2u);
  EXPECT_LT(model.loss_history().back(), model.loss_history().front());
}

TEST(Tagger, HeldOutFillerSentenceIsAllOutside) {
  const Corpus train = SeparableCorpus(200, 1);
  const TaggerModel model = Train(train, nullptr, FastConfig());
  const Corpus held = testing::MakeCorpus(
      {testing::MakeDocument("h", "fill3 fill17 fill42 fill8 .")}, SplitRole::kTest);
  const Document& doc = held.documents[0];
  const TaggedSentence out = Predict(model, doc, doc.sentences[0]);
  EXPECT_EQ(out.tags, TagSequence(doc.sentences[0].tokens.size(), "O"));
  EXPECT_TRUE(out.mentions.empty());
  for (const auto& d : out.distributions) EXPECT_TRUE(d.IsValid(1e-9));
}

TEST(Tagger, PredictionsRepeatable) {
  const Corpus train = SeparableCorpus(100, 2);
  const TaggerModel model = Train(train, nullptr, FastConfig());
  const Corpus test = SeparableCorpus(60, 9, SplitRole::kTest);
  EXPECT_EQ(PredictCorpus(model, test, 1), PredictCorpus(model, test, 1));
  EXPECT_EQ(PredictCorpus(model, test, 1), PredictCorpus(model, test, 3));
}

TEST(Tagger, UniformBiasEqualsPlainTraining) {
  const Corpus train = SeparableCorpus(150, 3);
  TaggerConfig plain = FastConfig();
  TaggerConfig debias = plain;
  debias.debias = true;
  const BiasTable uniform(3);  // every word unseen, so uniform
  const TaggerModel a = Train(train, nullptr, plain);
  const TaggerModel b = Train(train, &uniform, debias);
  const auto wa = a.Weights();
  const auto wb = b.Weights();
  ASSERT_EQ(wa.size(), wb.size());
  double worst = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) worst = std::max(worst, std::abs(wa[i] - wb[i]));
  EXPECT_LT(worst, 1e-6);
}

TEST(Tagger, DeterministicAcrossThreadCounts) {
  const Corpus train = SeparableCorpus(150, 4);
  const BiasTable table = BiasTable::Build(train, TagScheme(train.entity_types));
  for (bool debias : {false, true}) {
    TaggerConfig one = FastConfig();
    one.debias = debias;
    TaggerConfig four = one;
    four.threads = 4;
    const TaggerModel a = Train(train, debias ? &table : nullptr, one);
    const TaggerModel b = Train(train, debias ? &table : nullptr, four);
    EXPECT_EQ(a.Weights(), b.Weights());
    EXPECT_EQ(a.loss_history(), b.loss_history());
  }
}

TEST(Tagger, SeedChangesShuffleButStaysReproducible) {
  const Corpus train = SeparableCorpus(120, 5);
  TaggerConfig c = FastConfig();
  const TaggerModel a = Train(train, nullptr, c);
  const TaggerModel again = Train(train, nullptr, c);
  c.seed = 99;
  const TaggerModel other = Train(train, nullptr, c);
  EXPECT_EQ(a, again);
  EXPECT_NE(a.Weights(), other.Weights());
}

TEST(Tagger, CheckpointRoundTrip) {
  const Corpus train = SeparableCorpus(80, 6);
  TaggerConfig c = FastConfig();
  c.debias = true;
  c.temperature = 1.1;
  const BiasTable table = BiasTable::Build(train, TagScheme(train.entity_types));
  const TaggerModel model = Train(train, &table, c);
  std::ostringstream out;
  model.Save(out);
  std::istringstream in(out.str());
  const TaggerModel back = TaggerModel::Load(in);
  EXPECT_EQ(back.config(), model.config());
  EXPECT_EQ(back.Weights(), model.Weights());
  std::ostringstream again;
  back.Save(again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Tagger, DivergenceKeepsLastFiniteModel) {
  const Corpus train = SeparableCorpus(40, 7);
  TaggerConfig c = FastConfig();
  c.learning_rate = 1e306;
  try {
    Train(train, nullptr, c);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    for (double w : e.last_finite().Weights()) ASSERT_TRUE(std::isfinite(w));
  }
}

// Full per-token loss (summed over a random mini-batch) against central
// finite differences in the touched weights.
TEST(TaggerProperty, BatchGradientMatchesFiniteDifferences) {
  const Corpus train = SeparableCorpus(60, 8);
  const TagScheme scheme(train.entity_types);
  const BiasTable table = BiasTable::Build(train, scheme).Smooth(1.1);
  std::mt19937_64 rng(8);
  double worst = 0;
  std::size_t checked = 0;
  for (bool debias : {false, true}) {
    TaggerConfig config;
    config.hash_bits = 10;
    config.debias = debias;
    const auto data = PrepareTrainingData(train, scheme, debias ? &table : nullptr, 10);
    for (int trial = 0; trial < 5; ++trial) {
      TaggerModel model(scheme, config);
      std::vector<const std::vector<TrainingToken>*> batch;
      for (int i = 0; i < 4; ++i) batch.push_back(&data[rng() % data.size()]);
      const BatchGradient g0 = ComputeBatchGradient(model, batch);
      for (std::uint32_t f : g0.features) {
        for (std::size_t k = 0; k < scheme.size(); ++k) {
          model.SetWeight(f, k, std::normal_distribution<double>(0, 0.5)(rng));
        }
      }
      const BatchGradient g = ComputeBatchGradient(model, batch);
      const double h = 1e-5;
      for (std::size_t fi = 0; fi < g.features.size(); fi += 3) {
        const std::uint32_t f = g.features[fi];
        for (std::size_t k = 0; k < scheme.size(); ++k) {
          const double w = model.weight(f, k);
          model.SetWeight(f, k, w + h);
          const double up = ComputeBatchGradient(model, batch).loss;
          model.SetWeight(f, k, w - h);
          const double down = ComputeBatchGradient(model, batch).loss;
          model.SetWeight(f, k, w);
          worst = std::max(worst, std::abs((up - down) / (2 * h) - g.gradients[fi][k]));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
  EXPECT_LT(worst, 1e-5);
}

TEST(TokenFeatures, DeterministicAndBounded) {
  const auto tokens = Tokenize("Lung cancer (LC) risk", TokenizerMode::kPunctSplit);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto a = TokenFeatures(tokens, i, 12);
    EXPECT_EQ(a, TokenFeatures(tokens, i, 12));
    for (auto f : a) EXPECT_LT(f, 1u << 12);
  }
  EXPECT_EQ(WordShape("COVID-19"), "X-d");
}

}  // namespace
}  // namespace bioner
