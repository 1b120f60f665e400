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

#ifndef BUGSOL_FOREST_H_
#define BUGSOL_FOREST_H_

// Random forest binary classifier: bootstrap-resampled CART trees grown with
// weighted Gini impurity, random feature subsets per split, leaves holding
// the weighted positive fraction. Per-tree RNGs are derived from
// (seed, tree index) so parallel training reproduces the serial result.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bugsol {

struct ForestConfig {
  int n_trees = 100;
  int max_features = 0;  // 0 -> floor(sqrt(d)), at least 1
  int min_samples_split = 2;
  int max_depth = 0;  // 0 -> unlimited
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Preorder node: feature < 0 marks a leaf holding `value`; otherwise rows with
// x[feature] <= threshold go to the left child (the next node in preorder).
struct TreeNode {
  double threshold = 0;
  int feature = -1;
  double value = 0;
  int right = -1;  // index of the right child, derived on load
};

class DecisionTree {
 public:
  DecisionTree() = default;
  // Nodes in preorder; child links are recomputed. Throws ValidationError on
  // a malformed node array.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  double Predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, int n_features);

  // Mean of the trees' leaf values, in [0, 1].
  double PredictProba(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  int n_features() const { return n_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  void Write(std::ostream& out) const;
  static RandomForest Read(std::istream& in);

 private:
  std::vector<DecisionTree> trees_;
  int n_features_ = 0;
};

// `x` is instances x features. `weights` are per-instance sample weights
// (class weights already folded in). Throws ValidationError when fewer than
// two instances or only one class is present.
RandomForest TrainRandomForest(const Eigen::MatrixXd& x,
                               const std::vector<int>& labels,
                               const std::vector<double>& weights,
                               const ForestConfig& cfg);

}  // namespace bugsol

#endif  // BUGSOL_FOREST_H_
