// Copyright 2026 The Bugsol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "bugsol/error.h"
#include "bugsol/generators.h"
#include "bugsol/when.h"
#include "fixtures.h"

namespace bugsol {
namespace {

using testing::MakeExample;
using testing::Turn;

Example Sample(int t_g = 3) {
  return MakeExample("acme/widgets", 1, "Crash on save",
                     {{"ann", "It crashes."},
                      {"bob", "Writer not flushed."},
                      {"ann", "Thanks!"}},
                     t_g, "flush writer");
}

Vectorizer SampleVectorizer() {
  return Vectorizer::Fit({{"crash", "on", "save"}, {"it", "crashes", "."},
                          {"writer", "not", "flushed", "."}, {"thanks", "!"}});
}

TEST_CASE("vectorizer keeps the most frequent words with idf ln(N/df)") {
  const std::vector<Tokens> docs = {{"a", "b"}, {"a", "c"}, {"a", "b", "d"}};
  const Vectorizer v = Vectorizer::Fit(docs, 2);
  CHECK(v.words() == std::vector<std::string>{"a", "b"});
  CHECK(v.idf()[0] == 0.0);
  CHECK(v.idf()[1] == doctest::Approx(std::log(1.5)));
  CHECK(v.IndexOf("c") == -1);
  // Ties in document frequency break alphabetically.
  const Vectorizer w = Vectorizer::Fit(docs, 3);
  CHECK(w.words() == std::vector<std::string>{"a", "b", "c"});
  const SparseVector t = w.Transform({"b", "c", "zzz"});
  CHECK(t.size() == 2);
  CHECK(t.at("b") == doctest::Approx(std::log(1.5) /
                                     std::hypot(std::log(1.5), std::log(3.0))));
}

TEST_CASE("vectorizer serialization preserves the fingerprint") {
  const Vectorizer v = SampleVectorizer();
  std::stringstream buf;
  v.Write(buf);
  const Vectorizer back = Vectorizer::Read(buf);
  CHECK(back.words() == v.words());
  CHECK(back.idf() == v.idf());
  CHECK(back.Fingerprint() == v.Fingerprint());
  CHECK(Vectorizer::Fit({{"x"}}).Fingerprint() != v.Fingerprint());
}

TEST_CASE("scalar features are computed from the visible steps") {
  const Example e = Sample();
  const Vectorizer v = SampleVectorizer();
  const FeatureVector f = Featurize(e, 3, v);
  CHECK(f.position_t == 3);
  CHECK(f.len_ut == 2);
  CHECK(f.author_index == 1);
  CHECK(f.author_freq == doctest::Approx(2.0 / 3));
  CHECK(f.len_ratio == doctest::Approx(2.0 / 9));
  CHECK(f.title_len == 3);
  const FeatureVector g = Featurize(e, 2, v);
  CHECK(g.author_index == 2);
  CHECK(g.author_freq == 0.5);
  CHECK(g.len_ratio == doctest::Approx(4.0 / 7));
  CHECK_THROWS_AS(Featurize(e, 4, v), BoundsError);

  const Eigen::RowVectorXd row = DenseRow(f, v);
  const int s = 3 * static_cast<int>(v.size());
  CHECK(row.size() == FeatureDimension(v));
  CHECK(row(s) == 3);
  CHECK(row(s + 5) == 3);
  CHECK(row(v.IndexOf("thanks") + static_cast<int>(v.size())) > 0);
  CHECK(row(v.IndexOf("writer") + static_cast<int>(v.size())) == 0);
  CHECK(row(v.IndexOf("writer") + 2 * static_cast<int>(v.size())) > 0);
}

TEST_CASE("instances cover steps up to t_g and weight augmentation") {
  const std::vector<Example> corpus = {Sample(2), Sample(1)};
  const std::vector<Discussion> aug = {
      testing::MakeDiscussion("q/a", 1, "How to build", {{"x", "How?"}})};
  const Vectorizer v = SampleVectorizer();
  const InstanceSet set = MakeInstances(
      {corpus[0]}, {}, v, InstanceConfig{0.7, std::nullopt});
  REQUIRE(set.instances.size() == 2);
  CHECK_FALSE(set.instances[0].label);
  CHECK(set.instances[1].label);
  CHECK(set.class_weights == ClassWeights{1.0, 1.0});

  const InstanceSet with_aug =
      MakeInstances({corpus[0]}, aug, v, InstanceConfig{0.7, std::nullopt});
  REQUIRE(with_aug.instances.size() == 3);
  // 1 positive, 2 negatives: weights 3/2 and 3/4.
  CHECK(with_aug.class_weights.positive == 1.5);
  CHECK(with_aug.class_weights.negative == 0.75);
  CHECK(with_aug.instances[2].example_id == "q/a#1");
  CHECK(with_aug.instances[2].weight == doctest::Approx(0.7 * 0.75));

  const InstanceSet preset =
      MakeInstances(corpus, {}, v, InstanceConfig{0.7, kPresetClassWeights});
  CHECK(preset.class_weights == kPresetClassWeights);
  CHECK(preset.instances[1].weight == 1.543);
  CHECK_THROWS_AS(BalancedClassWeights(0, 3), ValidationError);
}

TEST_CASE("inference stops at the first positive step") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int T = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<Turn> turns;
    std::vector<double> trace;
    for (int t = 0; t < T; ++t) {
      turns.push_back({"a" + std::to_string(t % 2), "step " + std::to_string(t)});
      trace.push_back(u(rng));
    }
    const int t_g = std::uniform_int_distribution<int>(1, T)(rng);
    const Example e = MakeExample("p/q", trial + 1, "title", turns, t_g, "d");
    const double thr = u(rng);
    const WhenPrediction p = InferTp(
        [&](const Context& c) { return trace[c.at_step - 1]; }, e, thr);
    std::optional<int> expected;
    for (int t = 1; t <= t_g && !expected; ++t) {
      if (trace[t - 1] >= thr) expected = t;
    }
    CHECK(p.t_p == expected);
    const int n = expected ? *expected : t_g;
    CHECK(p.probs == std::vector<double>(trace.begin(), trace.begin() + n));
  }
}

TEST_CASE("inference thresholds and caps at the boundaries") {
  const Example e = Sample(2);
  const StepScorer half = [](const Context&) { return 0.5; };
  CHECK(InferTp(half, e, 0.0).t_p == 1);
  CHECK_FALSE(InferTp(half, e, 1.01).t_p.has_value());
  CHECK(InferTp(half, e, 1.01).probs.size() == 2);
  CHECK(InferTp(half, e, 1.01, 3).probs.size() == 3);
  CHECK(InferTp(half, e, 1.01, 9).probs.size() == 3);
  // Never scores a step beyond the cap.
  InferTp([&](const Context& c) {
    CHECK(c.at_step <= 2);
    return 0.0;
  }, e);
}

TEST_CASE("fixed baselines") {
  CHECK(BaselineFirst(Sample(3)) == WhenPrediction{"acme/widgets#1", 1, {1.0}});
  CHECK(BaselineSecond(Sample(3)) ==
        WhenPrediction{"acme/widgets#1", 2, {0.0, 1.0}});
  CHECK(BaselineSecond(Sample(2)).t_p == 2);
  CHECK(BaselineSecond(Sample(1)) ==
        WhenPrediction{"acme/widgets#1", std::nullopt, {0.0}});
  CHECK(DefaultPositiveRate(RandomMode::kUniform) == 0.5);
  CHECK(DefaultPositiveRate(RandomMode::kDist) == 0.549);
}

TEST_CASE("random baseline draws at the requested rate") {
  int hits = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Example e = MakeExample("r/s", i + 1, "t", {{"a", "x"}}, 1, "d");
    const WhenPrediction p = BaselineRandom(e, 0.5, 99);
    CHECK(p.probs.size() == 1);
    hits += p.t_p.has_value();
    CHECK(p == BaselineRandom(e, 0.5, 99));
  }
  CHECK(hits >= 4900);
  CHECK(hits <= 5100);
  CHECK_FALSE(BaselineRandom(Sample(), 0.0, 1).t_p.has_value());
  CHECK(BaselineRandom(Sample(), 1.0, 1).t_p == 1);
  CHECK_THROWS_AS(BaselineRandom(Sample(), 1.5, 1), ValidationError);
}

TEST_CASE("predictions round-trip through JSON") {
  const WhenPrediction none{"a#1", std::nullopt, {0.1, 0.2}};
  const OrderedJson j = ToJson(none);
  CHECK(j["t_p"].is_null());
  CHECK(FromJson<WhenPrediction>(Json::parse(j.dump())) == none);
  const WhenPrediction some{"a#2", 2, {0.1, 0.9}};
  CHECK(FromJson<WhenPrediction>(Json::parse(ToJson(some).dump())) == some);
  CHECK_THROWS_AS(FromJson<WhenPrediction>(Json::parse(
                      R"({"id": "a", "t_p": 3, "probs": [0.1]})")),
                  ValidationError);
}

TEST_CASE("trained model saves, loads and scores identically") {
  const auto train = testing::SyntheticExamples(60, 3);
  const auto aug = testing::SyntheticDiscussions(60, 3);
  WhenTrainConfig cfg;
  cfg.forest.n_trees = 20;
  cfg.forest.seed = 5;
  cfg.max_vocab = 100;
  const WhenModel model = TrainWhenModel(train, aug, cfg);
  CHECK(model.vectorizer().size() <= 100);
  const std::uint64_t fp = model.vectorizer().Fingerprint();

  testing::TempDir dir("when");
  const std::string path = dir.File("model.txt");
  model.Save(path);
  const WhenModel loaded = WhenModel::Load(path);
  CHECK(loaded.vectorizer().Fingerprint() == fp);
  CHECK(loaded.seed() == 5);
  CHECK(loaded.class_weights() == model.class_weights());
  for (const Example& e : train) {
    const WhenPrediction a = InferTp(model, e);
    CHECK(a == InferTp(loaded, e));
    for (double p : a.probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  CHECK(model.vectorizer().Fingerprint() == fp);

  WriteFile(path, "NOTAMODEL\n");
  CHECK_THROWS_AS(WhenModel::Load(path), ParseError);
  CHECK_THROWS_AS(WhenModel::Load(dir.File("missing")), IoError);
}

}  // namespace
}  // namespace bugsol
