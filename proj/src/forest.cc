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

#include "bugsol/forest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "bugsol/error.h"
#include "bugsol/parallel.h"

namespace bugsol {
namespace {

struct Sample {
  int row;
  double weight;  // bootstrap multiplicity x instance weight
};

double Gini(double pos, double total) {
  if (total <= 0) return 0;
  const double p = pos / total;
  return 1.0 - p * p - (1 - p) * (1 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& labels,
              const ForestConfig& cfg, std::mt19937_64& rng)
      : x_(x), labels_(labels), cfg_(cfg), rng_(rng) {
    const int d = static_cast<int>(x.cols());
    mtry_ = cfg.max_features > 0
                ? std::min(cfg.max_features, d)
                : std::max(1, static_cast<int>(std::floor(std::sqrt(d))));
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), 0);
  }

  std::vector<TreeNode> Build(std::vector<Sample> samples) {
    nodes_.clear();
    Grow(samples, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0;
    double decrease = 0;
  };

  void Grow(std::vector<Sample>& samples, int depth) {
    double total = 0, pos = 0;
    for (const Sample& s : samples) {
      total += s.weight;
      if (labels_[s.row]) pos += s.weight;
    }
    const int node = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{0, -1, total > 0 ? pos / total : 0.0, -1});

    const bool pure = pos <= 0 || pos >= total;
    const bool too_small =
        static_cast<int>(samples.size()) < cfg_.min_samples_split;
    const bool too_deep = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
    if (pure || too_small || too_deep) return;

    const Split split = BestSplit(samples, total, pos);
    if (split.feature < 0) return;

    std::vector<Sample> left, right;
    for (const Sample& s : samples) {
      (x_(s.row, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    if (left.empty() || right.empty()) return;
    samples.clear();
    samples.shrink_to_fit();

    nodes_[node].feature = split.feature;
    nodes_[node].threshold = split.threshold;
    Grow(left, depth + 1);
    nodes_[node].right = static_cast<int>(nodes_.size());
    Grow(right, depth + 1);
  }

  // Draws features without replacement; after the first mtry draws, keeps
  // drawing only while no candidate has produced a valid split.
  Split BestSplit(const std::vector<Sample>& samples, double total,
                  double pos) {
    const double parent = total * Gini(pos, total);
    Split best;
    const int d = static_cast<int>(features_.size());
    std::vector<std::pair<double, int>> column(samples.size());
    for (int drawn = 0; drawn < d; ++drawn) {
      if (drawn >= mtry_ && best.feature >= 0) break;
      std::uniform_int_distribution<int> pick(drawn, d - 1);
      std::swap(features_[drawn], features_[pick(rng_)]);
      const int f = features_[drawn];

      for (std::size_t i = 0; i < samples.size(); ++i) {
        column[i] = {x_(samples[i].row, f), static_cast<int>(i)};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;

      double left_total = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const Sample& s = samples[column[i].second];
        left_total += s.weight;
        if (labels_[s.row]) left_pos += s.weight;
        if (column[i].first == column[i + 1].first) continue;
        const double right_total = total - left_total;
        const double right_pos = pos - left_pos;
        const double child = left_total * Gini(left_pos, left_total) +
                             right_total * Gini(right_pos, right_total);
        const double decrease = parent - child;
        if (decrease > best.decrease + 1e-12) {
          best.feature = f;
          best.decrease = decrease;
          best.threshold = 0.5 * (column[i].first + column[i + 1].first);
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& labels_;
  const ForestConfig& cfg_;
  std::mt19937_64& rng_;
  int mtry_ = 1;
  std::vector<int> features_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("decision tree has no nodes");
  // Recompute right-child links from the preorder layout.
  std::size_t pos = 0;
  std::function<void()> walk = [&] {
    if (pos >= nodes_.size()) {
      throw ValidationError("truncated decision tree node array");
    }
    const std::size_t self = pos++;
    if (nodes_[self].feature < 0) return;
    walk();
    nodes_[self].right = static_cast<int>(pos);
    walk();
  };
  walk();
  if (pos != nodes_.size()) {
    throw ValidationError("decision tree node array has trailing nodes");
  }
}

double DecisionTree::Predict(
    const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    i = row(nodes_[i].feature) <= nodes_[i].threshold
            ? i + 1
            : static_cast<std::size_t>(nodes_[i].right);
  }
  return nodes_[i].value;
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, int n_features)
    : trees_(std::move(trees)), n_features_(n_features) {}

double RandomForest::PredictProba(
    const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  if (row.size() != n_features_) {
    throw ValidationError("feature vector has " + std::to_string(row.size()) +
                          " dims, model expects " +
                          std::to_string(n_features_));
  }
  if (trees_.empty()) return 0.0;
  double sum = 0;
  for (const DecisionTree& t : trees_) sum += t.Predict(row);
  return sum / static_cast<double>(trees_.size());
}

void RandomForest::Write(std::ostream& out) const {
  out.precision(17);
  out << "forest " << trees_.size() << " " << n_features_ << "\n";
  for (const DecisionTree& t : trees_) {
    out << "tree " << t.nodes().size() << "\n";
    for (const TreeNode& n : t.nodes()) {
      out << n.threshold << " " << n.feature << " " << n.value << "\n";
    }
  }
}

RandomForest RandomForest::Read(std::istream& in) {
  std::string tag;
  std::size_t n_trees = 0;
  int n_features = 0;
  if (!(in >> tag >> n_trees >> n_features) || tag != "forest") {
    throw ParseError("expected 'forest <trees> <features>' header");
  }
  std::vector<DecisionTree> trees;
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::size_t n_nodes = 0;
    if (!(in >> tag >> n_nodes) || tag != "tree") {
      throw ParseError("expected 'tree <nodes>' header for tree " +
                       std::to_string(t));
    }
    std::vector<TreeNode> nodes(n_nodes);
    for (TreeNode& n : nodes) {
      if (!(in >> n.threshold >> n.feature >> n.value)) {
        throw ParseError("truncated node list in tree " + std::to_string(t));
      }
      if (n.feature >= n_features || n.value < 0 || n.value > 1) {
        throw ParseError("invalid node in tree " + std::to_string(t));
      }
    }
    trees.emplace_back(std::move(nodes));
  }
  return RandomForest(std::move(trees), n_features);
}

RandomForest TrainRandomForest(const Eigen::MatrixXd& x,
                               const std::vector<int>& labels,
                               const std::vector<double>& weights,
                               const ForestConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n || weights.size() != n) {
    throw ValidationError("labels/weights must match the instance count");
  }
  if (n < 2) throw ValidationError("forest training needs >= 2 instances");
  const long positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(n)) {
    throw ValidationError("forest training needs both classes");
  }
  if (cfg.n_trees < 1) throw ValidationError("n_trees must be >= 1");
  for (double w : weights) {
    if (!(w > 0)) throw ValidationError("instance weights must be > 0");
  }

  std::vector<DecisionTree> trees(cfg.n_trees);
  ParallelFor(static_cast<std::size_t>(cfg.n_trees), cfg.threads,
              [&](std::size_t t) {
                std::mt19937_64 rng(MixSeed(cfg.seed, t));
                std::vector<double> multiplicity(n, cfg.bootstrap ? 0.0 : 1.0);
                if (cfg.bootstrap) {
                  std::uniform_int_distribution<std::size_t> draw(0, n - 1);
                  for (std::size_t i = 0; i < n; ++i) multiplicity[draw(rng)] += 1;
                }
                std::vector<Sample> samples;
                for (std::size_t i = 0; i < n; ++i) {
                  if (multiplicity[i] > 0) {
                    samples.push_back(
                        {static_cast<int>(i), multiplicity[i] * weights[i]});
                  }
                }
                TreeBuilder builder(x, labels, cfg, rng);
                trees[t] = DecisionTree(builder.Build(std::move(samples)));
              });
  return RandomForest(std::move(trees), static_cast<int>(x.cols()));
}

}  // namespace bugsol
