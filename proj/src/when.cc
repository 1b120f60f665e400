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

#include "bugsol/when.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bugsol/error.h"
#include "bugsol/parallel.h"

namespace bugsol {
namespace {

void AppendSparse(Eigen::RowVectorXd& row, int offset, const SparseVector& v,
                  const Vectorizer& vectorizer) {
  for (const auto& [word, weight] : v) {
    const int i = vectorizer.IndexOf(word);
    if (i >= 0) row(offset + i) = weight;
  }
}

// Bernoulli draw from 53 random bits; exact at p = 0 and p = 1.
bool Draw(std::mt19937_64& rng, double p) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

int ResolveCap(const Example& example, std::optional<int> max_t) {
  const int cap = max_t.value_or(example->t_g);
  return std::clamp(cap, 0, example.T());
}

}  // namespace

Vectorizer Vectorizer::Fit(const std::vector<Tokens>& documents,
                           std::size_t max_vocab) {
  std::map<std::string, int> df;
  for (const Tokens& doc : documents) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const std::string& w : seen) ++df[w];
  }
  std::vector<std::pair<std::string, int>> ranked(df.begin(), df.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_vocab) ranked.resize(max_vocab);
  std::sort(ranked.begin(), ranked.end());

  Vectorizer v;
  const double n = static_cast<double>(documents.size());
  for (const auto& [word, count] : ranked) {
    v.index_[word] = static_cast<int>(v.words_.size());
    v.words_.push_back(word);
    v.idf_.push_back(std::log(n / count));
  }
  return v;
}

int Vectorizer::IndexOf(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

SparseVector Vectorizer::Transform(const Tokens& tokens) const {
  std::map<int, int> counts;
  for (const std::string& t : tokens) {
    const int i = IndexOf(t);
    if (i >= 0) ++counts[i];
  }
  SparseVector out;
  double norm = 0;
  for (const auto& [i, c] : counts) {
    const double w = (1.0 + std::log(static_cast<double>(c))) * idf_[i];
    if (w == 0) continue;
    out[words_[i]] = w;
    norm += w * w;
  }
  norm = std::sqrt(norm);
  for (auto& [word, w] : out) w /= norm;
  return out;
}

std::uint64_t Vectorizer::Fingerprint() const {
  std::ostringstream s;
  Write(s);
  return HashString(s.str());
}

void Vectorizer::Write(std::ostream& out) const {
  out << std::setprecision(17);
  out << "vectorizer " << words_.size() << "\n";
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << std::quoted(words_[i]) << " " << idf_[i] << "\n";
  }
}

Vectorizer Vectorizer::Read(std::istream& in) {
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "vectorizer") {
    throw ParseError("expected 'vectorizer <size>' header");
  }
  Vectorizer v;
  for (std::size_t i = 0; i < n; ++i) {
    std::string word;
    double idf = 0;
    if (!(in >> std::quoted(word) >> idf) || idf < 0) {
      throw ParseError("bad vocabulary entry " + std::to_string(i));
    }
    if (!v.index_.emplace(word, static_cast<int>(i)).second) {
      throw ParseError("duplicate vocabulary word '" + word + "'");
    }
    v.words_.push_back(std::move(word));
    v.idf_.push_back(idf);
  }
  return v;
}

std::vector<Tokens> VectorizerDocuments(const std::vector<Example>& corpus,
                                        const std::vector<Discussion>& aug) {
  std::vector<Tokens> docs;
  auto add = [&docs](const auto& record) {
    docs.push_back(record->title_tokens);
    for (const Utterance& u : record->utterances) docs.push_back(u.tokens);
  };
  for (const Example& e : corpus) add(e);
  for (const Discussion& d : aug) add(d);
  return docs;
}

FeatureVector Featurize(const Context& context, const Vectorizer& vectorizer) {
  const int t = context.at_step;
  if (t < 1 || static_cast<int>(context.utterances.size()) != t) {
    throw BoundsError(context.id + ": context has no step to featurize");
  }
  const Utterance& ut = context.utterances.back();

  FeatureVector f;
  f.tfidf_title = vectorizer.Transform(context.title);
  f.tfidf_ut = vectorizer.Transform(ut.tokens);
  Tokens all;
  std::vector<std::string> authors;
  int by_author = 0;
  for (const Utterance& u : context.utterances) {
    all.insert(all.end(), u.tokens.begin(), u.tokens.end());
    if (std::find(authors.begin(), authors.end(), u.author) == authors.end()) {
      authors.push_back(u.author);
    }
    if (u.author == ut.author) ++by_author;
  }
  f.tfidf_agg = vectorizer.Transform(all);
  f.position_t = t;
  f.len_ut = static_cast<int>(ut.tokens.size());
  f.author_index = static_cast<int>(
      std::find(authors.begin(), authors.end(), ut.author) - authors.begin() + 1);
  f.author_freq = static_cast<double>(by_author) / t;
  f.len_ratio = all.empty() ? 1.0
                            : static_cast<double>(ut.tokens.size()) / all.size();
  f.title_len = static_cast<int>(context.title.size());
  return f;
}

FeatureVector Featurize(const Example& example, int t,
                        const Vectorizer& vectorizer) {
  return Featurize(TruncateAt(example, t), vectorizer);
}

int FeatureDimension(const Vectorizer& vectorizer) {
  return 3 * static_cast<int>(vectorizer.size()) + kScalarFeatures;
}

Eigen::RowVectorXd DenseRow(const FeatureVector& f,
                            const Vectorizer& vectorizer) {
  const int v = static_cast<int>(vectorizer.size());
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(FeatureDimension(vectorizer));
  AppendSparse(row, 0, f.tfidf_title, vectorizer);
  AppendSparse(row, v, f.tfidf_ut, vectorizer);
  AppendSparse(row, 2 * v, f.tfidf_agg, vectorizer);
  const int s = 3 * v;
  row(s + 0) = f.position_t;
  row(s + 1) = f.len_ut;
  row(s + 2) = f.author_index;
  row(s + 3) = f.author_freq;
  row(s + 4) = f.len_ratio;
  row(s + 5) = f.title_len;
  return row;
}

ClassWeights BalancedClassWeights(std::size_t n_positive,
                                  std::size_t n_negative) {
  if (n_positive == 0 || n_negative == 0) {
    throw ValidationError("class weights need both classes present");
  }
  const double n = static_cast<double>(n_positive + n_negative);
  return {n / (2.0 * n_positive), n / (2.0 * n_negative)};
}

InstanceSet MakeInstances(const std::vector<Example>& corpus,
                          const std::vector<Discussion>& augmentation,
                          const Vectorizer& vectorizer,
                          const InstanceConfig& cfg, int threads) {
  if (corpus.empty()) throw ValidationError("instance corpus is empty");
  if (!(cfg.aug_weight > 0)) throw ValidationError("aug_weight must be > 0");

  // Slot per record so the assembled order is thread-count independent.
  std::vector<std::vector<StepInstance>> slots(corpus.size() +
                                               augmentation.size());
  ParallelFor(slots.size(), threads, [&](std::size_t i) {
    std::vector<StepInstance>& out = slots[i];
    if (i < corpus.size()) {
      const Example& e = corpus[i];
      for (int t = 1; t <= e->t_g; ++t) {
        out.push_back({e->id, t, t == e->t_g, 1.0,
                       Featurize(TruncateAt(e, t), vectorizer)});
      }
    } else {
      const Discussion& d = augmentation[i - corpus.size()];
      for (int t = 1; t <= d.T(); ++t) {
        out.push_back({d->id, t, false, cfg.aug_weight,
                       Featurize(TruncateAt(d, t), vectorizer)});
      }
    }
  });

  InstanceSet set;
  std::size_t pos = 0, neg = 0;
  for (auto& slot : slots) {
    for (StepInstance& s : slot) {
      (s.label ? pos : neg) += 1;
      set.instances.push_back(std::move(s));
    }
  }
  set.class_weights = cfg.class_weights ? *cfg.class_weights
                                        : BalancedClassWeights(pos, neg);
  for (StepInstance& s : set.instances) {
    s.weight *= s.label ? set.class_weights.positive
                        : set.class_weights.negative;
  }
  return set;
}

WhenModel::WhenModel(Vectorizer vectorizer, RandomForest forest,
                     ClassWeights class_weights, std::uint64_t seed)
    : vectorizer_(std::move(vectorizer)),
      forest_(std::move(forest)),
      class_weights_(class_weights),
      seed_(seed) {
  if (forest_.n_features() != FeatureDimension(vectorizer_)) {
    throw ValidationError("forest width does not match the vectorizer");
  }
}

double WhenModel::Probability(const Context& context) const {
  return forest_.PredictProba(DenseRow(Featurize(context, vectorizer_),
                                       vectorizer_));
}

void WhenModel::Save(const std::string& path) const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kWhenModelMagic << "\n";
  out << "seed " << seed_ << "\n";
  out << "class_weights " << class_weights_.positive << " "
      << class_weights_.negative << "\n";
  forest_.Write(out);
  vectorizer_.Write(out);
  WriteFile(path, out.str());
}

WhenModel WhenModel::Load(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::string magic, tag;
  if (!(in >> magic) || magic != kWhenModelMagic) {
    throw ParseError(path + ": not a when-classifier model (bad magic)");
  }
  std::uint64_t seed = 0;
  ClassWeights w;
  if (!(in >> tag >> seed) || tag != "seed") {
    throw ParseError(path + ": missing seed");
  }
  if (!(in >> tag >> w.positive >> w.negative) || tag != "class_weights") {
    throw ParseError(path + ": missing class_weights");
  }
  RandomForest forest = RandomForest::Read(in);
  Vectorizer vectorizer = Vectorizer::Read(in);
  try {
    return WhenModel(std::move(vectorizer), std::move(forest), w, seed);
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

WhenModel TrainWhenModel(const std::vector<Example>& train,
                         const std::vector<Discussion>& augmentation,
                         const WhenTrainConfig& cfg) {
  Vectorizer vectorizer =
      Vectorizer::Fit(VectorizerDocuments(train, augmentation), cfg.max_vocab);
  InstanceSet set = MakeInstances(train, augmentation, vectorizer,
                                  cfg.instances, cfg.forest.threads);
  const int d = FeatureDimension(vectorizer);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(set.instances.size()), d);
  std::vector<int> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const StepInstance& s = set.instances[i];
    x.row(static_cast<Eigen::Index>(i)) = DenseRow(s.features, vectorizer);
    labels.push_back(s.label ? 1 : 0);
    weights.push_back(s.weight);
  }
  RandomForest forest = TrainRandomForest(x, labels, weights, cfg.forest);
  return WhenModel(std::move(vectorizer), std::move(forest), set.class_weights,
                   cfg.forest.seed);
}

OrderedJson ToJson(const WhenPrediction& p) {
  OrderedJson j;
  j["id"] = p.example_id;
  j["t_p"] = p.t_p ? OrderedJson(*p.t_p) : OrderedJson(nullptr);
  j["probs"] = p.probs;
  return j;
}

template <>
WhenPrediction FromJson<WhenPrediction>(const Json& j) {
  WhenPrediction p;
  p.example_id = GetField<std::string>(j, "id");
  if (!j.contains("t_p")) throw ValidationError("missing field 't_p'");
  if (!j["t_p"].is_null()) {
    p.t_p = GetField<int>(j, "t_p");
    if (*p.t_p < 1) throw ValidationError("t_p must be >= 1 or null");
  }
  p.probs = GetField<std::vector<double>>(j, "probs");
  if (p.t_p && static_cast<int>(p.probs.size()) != *p.t_p) {
    throw ValidationError("probs must cover exactly steps 1..t_p");
  }
  return p;
}

WhenPrediction InferTp(const StepScorer& scorer, const Example& example,
                       double threshold, std::optional<int> max_t) {
  WhenPrediction p;
  p.example_id = example->id;
  const int cap = ResolveCap(example, max_t);
  for (int t = 1; t <= cap; ++t) {
    const double prob = scorer(TruncateAt(example, t));
    p.probs.push_back(prob);
    if (prob >= threshold) {
      p.t_p = t;
      break;
    }
  }
  return p;
}

WhenPrediction InferTp(const WhenModel& model, const Example& example,
                       double threshold, std::optional<int> max_t) {
  return InferTp([&model](const Context& c) { return model.Probability(c); },
                 example, threshold, max_t);
}

WhenPrediction BaselineFirst(const Example& example) {
  return {example->id, 1, {1.0}};
}

WhenPrediction BaselineSecond(const Example& example) {
  if (example->t_g >= 2) return {example->id, 2, {0.0, 1.0}};
  return {example->id, std::nullopt, {0.0}};
}

double DefaultPositiveRate(RandomMode mode) {
  return mode == RandomMode::kUniform ? 0.5 : kDistPositiveRate;
}

WhenPrediction BaselineRandom(const Example& example, double p_pos,
                              std::uint64_t seed, std::optional<int> max_t) {
  if (!(p_pos >= 0 && p_pos <= 1)) {
    throw ValidationError("p_pos must lie in [0, 1]");
  }
  std::mt19937_64 rng(MixSeed(seed, HashString(example->id)));
  WhenPrediction p;
  p.example_id = example->id;
  const int cap = ResolveCap(example, max_t);
  for (int t = 1; t <= cap; ++t) {
    const bool positive = Draw(rng, p_pos);
    p.probs.push_back(positive ? 1.0 : 0.0);
    if (positive) {
      p.t_p = t;
      break;
    }
  }
  return p;
}

}  // namespace bugsol
