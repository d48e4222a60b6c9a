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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bioner/bias.h"
#include "../test_util.h"

namespace bioner {
namespace {

using testing::MakeCorpus;
using testing::MakeDocument;

TagDistribution D(std::vector<double> p) { return {std::move(p)}; }

TagDistribution RandomDistribution(std::mt19937_64& rng, std::size_t k) {
  std::vector<double> logits(k);
  std::normal_distribution<double> n(0.0, 2.0);
  for (double& l : logits) l = n(rng);
  return D(Softmax(logits));
}

TEST(BiasTable, CountRatio) {
  BiasTable t(3);
  for (std::size_t k : {0, 0, 0, 2}) t.Observe("w", k);
  EXPECT_EQ(t.RawDistribution("w"), (std::vector<double>{0.75, 0.0, 0.25}));
  EXPECT_EQ(t.Total("w"), 4u);
}

TEST(BiasTable, AlwaysBeginWord) {
  const Corpus c = MakeCorpus({MakeDocument(
      "d", "encephalopathy and encephalopathy",
      {{.surface = "encephalopathy"}, {.surface = "encephalopathy", .from = 5}})});
  const BiasTable t = BiasTable::Build(c, TagScheme(c.entity_types));
  EXPECT_EQ(t.RawDistribution("encephalopathy")[0], 1.0);
  EXPECT_EQ(t.RawDistribution("and"), (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(BiasTable, UnseenWordIsUniform) {
  const BiasTable t(3);
  const auto d = t.Distribution("never");
  for (double p : d.probs) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(BiasTable, EmptyCorpusThrows) {
  Corpus c;
  EXPECT_THROW(BiasTable::Build(c, TagScheme({"Disease"})), Error);
}

TEST(SmoothDistribution, FloorWithoutTemperature) {
  const auto b = SmoothDistribution(std::vector<double>{1.0, 0.0, 0.0}, std::nullopt);
  EXPECT_NEAR(b[0], 0.9999999800000004, 1e-15);
  EXPECT_NEAR(b[1], 9.999999800000004e-9, 1e-20);
  EXPECT_NEAR(b[2], 9.999999800000004e-9, 1e-20);
}

// Frozen from a 40-digit evaluation of max(b, 1e-8)^(1/1.1), normalized.
TEST(SmoothDistribution, TemperatureOracle) {
  const auto b = SmoothDistribution(std::vector<double>{0.5, 0.5, 0.0}, 1.1);
  EXPECT_NEAR(b[0], 0.49999997494604190998, 1e-15);
  EXPECT_NEAR(b[1], 0.49999997494604190998, 1e-15);
  EXPECT_NEAR(b[2], 5.0107916180038295243e-8, 1e-20);
}

TEST(SmoothDistribution, UniformStaysUniform) {
  for (double t : {0.3, 1.0, 1.1, 7.0}) {
    for (double p : SmoothDistribution(std::vector<double>{0.25, 0.25, 0.25, 0.25}, t)) {
      EXPECT_NEAR(p, 0.25, 1e-15);
    }
  }
}

TEST(BiasTable, SmoothRejectsNonPositiveTemperature) {
  const BiasTable t(3);
  EXPECT_THROW(t.Smooth(0.0), std::invalid_argument);
  EXPECT_THROW(t.Smooth(-1.0), std::invalid_argument);
  EXPECT_NO_THROW(t.Smooth(std::nullopt));
}

TEST(BiasProduct, Examples) {
  const auto same = BiasProduct(D({0.5, 0.5}), D({0.5, 0.5}));
  EXPECT_NEAR(same.probs[0], 0.5, 1e-12);
  const auto mixed = BiasProduct(D({0.8, 0.2}), D({0.25, 0.75}));
  EXPECT_NEAR(mixed.probs[0], 0.57142857142857142857, 1e-12);
  EXPECT_NEAR(mixed.probs[1], 0.42857142857142857143, 1e-12);
  const auto onehot = BiasProduct(D({0.3, 0.3, 0.4}), D({0.0, 1.0, 0.0}));
  EXPECT_GT(onehot.probs[1], 1.0 - 1e-6);
}

TEST(BiasProductProperty, CommutativeShiftInvariantAndValid) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + rng() % 5;
    const auto p = RandomDistribution(rng, k);
    const auto b = RandomDistribution(rng, k);
    const auto pb = BiasProduct(p, b);
    const auto bp = BiasProduct(b, p);
    ASSERT_TRUE(pb.IsValid());
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(pb.probs[i], bp.probs[i], 1e-12);

    // Adding a constant to log b is scaling b, which must not matter.
    TagDistribution scaled = b;
    for (double& x : scaled.probs) x *= 0.37;
    const auto shifted = BiasProduct(p, scaled);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(pb.probs[i], shifted.probs[i], 1e-12);
  }
}

TEST(BiasProductProperty, UniformBiasKeepsArgmax) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + rng() % 5;
    const auto p = RandomDistribution(rng, k);
    EXPECT_EQ(BiasProduct(p, TagDistribution::Uniform(k)).Argmax(), p.Argmax());
  }
}

TEST(DebiasedNll, UniformBiasEqualsPlainNll) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> z(4);
    for (double& x : z) x = std::normal_distribution<double>(0, 3)(rng);
    const std::size_t gold = rng() % 4;
    const auto a = DebiasedNll(z, TagDistribution::Uniform(4), gold);
    const auto b = Nll(z, gold);
    EXPECT_NEAR(a.loss, b.loss, 1e-12);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(a.gradient[k], b.gradient[k], 1e-12);
  }
}

TEST(DebiasedNll, SkewedBiasShrinksGradient) {
  const std::vector<double> z{0.0, 0.0, 0.0};
  const auto plain = Nll(z, 0);
  const auto debiased = DebiasedNll(z, D({0.98, 0.01, 0.01}), 0);
  auto norm = [](const std::vector<double>& g) {
    double s = 0;
    for (double x : g) s += x * x;
    return std::sqrt(s);
  };
  EXPECT_LT(norm(debiased.gradient), norm(plain.gradient));
  EXPECT_LT(debiased.loss, plain.loss);
}

TEST(DebiasedNllProperty, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(4);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng() % 6;
    std::vector<double> z(k);
    for (double& x : z) x = std::normal_distribution<double>(0, 2)(rng);
    const auto b = RandomDistribution(rng, k);
    const std::size_t gold = rng() % k;
    const auto analytic = DebiasedNll(z, b, gold);
    const double h = 1e-5;
    for (std::size_t i = 0; i < k; ++i) {
      auto up = z;
      auto down = z;
      up[i] += h;
      down[i] -= h;
      const double fd =
          (DebiasedNll(up, b, gold).loss - DebiasedNll(down, b, gold).loss) / (2 * h);
      worst = std::max(worst, std::abs(fd - analytic.gradient[i]));
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(BiasTableProperty, DistributionsValidAndCountsConsistent) {
  std::mt19937_64 rng(5);
  const Corpus c = testing::RandomCorpus(rng, 8, 60, 0.3);
  const BiasTable t = BiasTable::Build(c, TagScheme(c.entity_types));
  for (const Document& doc : c.documents) {
    for (const Sentence& s : doc.sentences) {
      for (const Token& tok : s.tokens) {
        const auto* counts = t.Counts(tok.text);
        ASSERT_NE(counts, nullptr);
        std::uint64_t sum = 0;
        for (auto n : *counts) sum += n;
        EXPECT_EQ(sum, t.Total(tok.text));
        EXPECT_TRUE(t.Distribution(tok.text).IsValid());
        EXPECT_TRUE(t.Smooth(1.1).Distribution(tok.text).IsValid());
      }
    }
  }
}

TEST(BiasTableProperty, RebuildFromShuffledCorpusIsIdentical) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = testing::RandomCorpus(rng, 6, 30, 0.3);
    const BiasTable a = BiasTable::Build(c, TagScheme(c.entity_types));
    std::shuffle(c.documents.begin(), c.documents.end(), rng);
    const BiasTable b = BiasTable::Build(c, TagScheme(c.entity_types));
    EXPECT_EQ(a, b);
    std::ostringstream wa;
    std::ostringstream wb;
    a.Write(wa);
    b.Write(wb);
    EXPECT_EQ(wa.str(), wb.str());
  }
}

TEST(BiasTable, WriteReadRoundTrip) {
  std::mt19937_64 rng(7);
  const Corpus c = testing::RandomCorpus(rng, 3, 30, 0.3);
  const BiasTable t = BiasTable::Build(c, TagScheme(c.entity_types));
  std::ostringstream out;
  t.Write(out);
  std::istringstream in(out.str());
  EXPECT_EQ(BiasTable::Read(in), t);
}

}  // namespace
}  // namespace bioner
