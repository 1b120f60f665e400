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

#ifndef BUGSOL_WHEN_H_
#define BUGSOL_WHEN_H_

// When-to-generate classification: per-step featurization, training
// instance assembly, first-positive inference and the fixed baselines.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bugsol/forest.h"
#include "bugsol/generators.h"
#include "bugsol/jsonl.h"
#include "bugsol/types.h"

namespace bugsol {

// Capped TF-IDF vocabulary. Each title and each utterance of the fitting
// corpus is one document; the `max_vocab` most frequent words by document
// frequency are kept (ties alphabetical). Immutable after Fit.
class Vectorizer {
 public:
  Vectorizer() = default;
  static Vectorizer Fit(const std::vector<Tokens>& documents,
                        std::size_t max_vocab = 500);

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<double>& idf() const { return idf_; }
  // Index of `word` or -1.
  int IndexOf(const std::string& word) const;

  // L2-normalized 1+ln(tf) x idf over in-vocabulary words.
  SparseVector Transform(const Tokens& tokens) const;
  // Stable digest of the vocabulary and weights.
  std::uint64_t Fingerprint() const;

  void Write(std::ostream& out) const;
  static Vectorizer Read(std::istream& in);

 private:
  std::vector<std::string> words_;
  std::vector<double> idf_;
  std::map<std::string, int> index_;
};

// Training text for the vectorizer: titles and utterances.
std::vector<Tokens> VectorizerDocuments(const std::vector<Example>& corpus,
                                        const std::vector<Discussion>& aug);

struct FeatureVector {
  SparseVector tfidf_title;
  SparseVector tfidf_ut;
  SparseVector tfidf_agg;  // over U_1..U_t concatenated
  int position_t = 0;
  int len_ut = 0;
  int author_index = 0;  // 1-based order of first appearance
  double author_freq = 0;
  double len_ratio = 0;
  int title_len = 0;
};

inline constexpr int kScalarFeatures = 6;

// Features of the last utterance of `context` (t = context.at_step).
FeatureVector Featurize(const Context& context, const Vectorizer& vectorizer);
// Throws BoundsError when t is outside [1, T].
FeatureVector Featurize(const Example& example, int t,
                        const Vectorizer& vectorizer);

// [title | U_t | aggregate] vocabulary blocks followed by position_t, len_ut,
// author_index, author_freq, len_ratio, title_len.
Eigen::RowVectorXd DenseRow(const FeatureVector& f,
                            const Vectorizer& vectorizer);
int FeatureDimension(const Vectorizer& vectorizer);

struct StepInstance {
  std::string example_id;
  int t = 0;
  bool label = false;
  double weight = 1.0;
  FeatureVector features;
};

struct ClassWeights {
  double positive = 1.0;
  double negative = 1.0;
  bool operator==(const ClassWeights&) const = default;
};

// Inverse class proportion: n / (2 n_class). Throws ValidationError when a
// class is absent.
ClassWeights BalancedClassWeights(std::size_t n_positive,
                                  std::size_t n_negative);
inline constexpr ClassWeights kPresetClassWeights{1.543, 0.740};

struct InstanceConfig {
  double aug_weight = 0.7;
  // Unset: recompute from the assembled instances.
  std::optional<ClassWeights> class_weights;
};

struct InstanceSet {
  std::vector<StepInstance> instances;
  ClassWeights class_weights;
};

// Bug examples give steps 1..t_g with the positive at t_g; augmentation
// discussions give all-negative steps 1..T at aug_weight. Class weights are
// multiplied in afterwards.
InstanceSet MakeInstances(const std::vector<Example>& corpus,
                          const std::vector<Discussion>& augmentation,
                          const Vectorizer& vectorizer,
                          const InstanceConfig& cfg = {}, int threads = 1);

struct WhenTrainConfig {
  std::size_t max_vocab = 500;
  InstanceConfig instances;
  ForestConfig forest;
};

class WhenModel {
 public:
  WhenModel(Vectorizer vectorizer, RandomForest forest,
            ClassWeights class_weights, std::uint64_t seed);

  // P(positive) for the last step of `context`.
  double Probability(const Context& context) const;

  const Vectorizer& vectorizer() const { return vectorizer_; }
  const RandomForest& forest() const { return forest_; }
  const ClassWeights& class_weights() const { return class_weights_; }
  std::uint64_t seed() const { return seed_; }

  void Save(const std::string& path) const;
  // Throws IoError when unreadable, ParseError on a bad magic or body.
  static WhenModel Load(const std::string& path);

 private:
  Vectorizer vectorizer_;
  RandomForest forest_;
  ClassWeights class_weights_;
  std::uint64_t seed_;
};

inline constexpr const char* kWhenModelMagic = "IDWHEN1";

WhenModel TrainWhenModel(const std::vector<Example>& train,
                         const std::vector<Discussion>& augmentation,
                         const WhenTrainConfig& cfg);

struct WhenPrediction {
  std::string example_id;
  std::optional<int> t_p;
  std::vector<double> probs;  // steps 1..(t_p or the cap)
  bool operator==(const WhenPrediction&) const = default;
};

OrderedJson ToJson(const WhenPrediction& p);
template <>
WhenPrediction FromJson<WhenPrediction>(const Json& j);

// Scores one step given the context truncated at that step.
using StepScorer = std::function<double(const Context&)>;

// Walks t = 1..max_t and stops at the first P >= threshold. max_t defaults
// to t_g and is clamped to T.
WhenPrediction InferTp(const StepScorer& scorer, const Example& example,
                       double threshold = 0.5,
                       std::optional<int> max_t = std::nullopt);
WhenPrediction InferTp(const WhenModel& model, const Example& example,
                       double threshold = 0.5,
                       std::optional<int> max_t = std::nullopt);

WhenPrediction BaselineFirst(const Example& example);
// Positive at t = 2 when t_g >= 2, otherwise never.
WhenPrediction BaselineSecond(const Example& example);

enum class RandomMode { kUniform, kDist };
inline constexpr double kDistPositiveRate = 0.549;
double DefaultPositiveRate(RandomMode mode);

// Independent Bernoulli(p_pos) draw per step from an RNG seeded by
// (seed, example id). probs record the draws as 1 / 0.
WhenPrediction BaselineRandom(const Example& example, double p_pos,
                              std::uint64_t seed,
                              std::optional<int> max_t = std::nullopt);

}  // namespace bugsol

#endif  // BUGSOL_WHEN_H_
