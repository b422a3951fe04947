/*
 * Copyright 2026 The LaughSeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LAUGHSEG_IFOREST_HPP_
#define LAUGHSEG_IFOREST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "laughseg/rng.hpp"

namespace laughseg {

// Row-major N x D matrix of finite reals.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * cols_, cols_); }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Per-column z-score in place; constant columns become 0.
void standardize(FeatureMatrix& points);

struct ThresholdMode {
  enum class Kind { kAuto, kQuantile };
  Kind kind = Kind::kAuto;
  double q = 0.0;  // used when kind == kQuantile, 0 < q < 1

  static ThresholdMode automatic() { return {}; }
  static ThresholdMode quantile(double q) { return {Kind::kQuantile, q}; }
  // "auto" or "quantile:Q".
  static ThresholdMode parse(const std::string& text);
  std::string to_string() const;
};

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t subsample = 256;
  std::uint64_t seed = 42;
  ThresholdMode threshold;

  void validate() const;
};

// Average path length of an unsuccessful BST search over n points:
// 2 (ln(n - 1) + gamma) - 2 (n - 1) / n, and 0 for n <= 1.
double c_factor(std::size_t n);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double split = 0.0;         // x[feature] < split goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t size = 0;     // training points that reached this node

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class IsolationTree {
 public:
  IsolationTree() = default;
  explicit IsolationTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  // Number of edges from the root to the leaf reached by x.
  std::size_t depth(std::span<const double> x) const;
  // depth(x) + c(leaf size).
  double path_length(std::span<const double> x) const;
  std::size_t max_depth() const;

  friend bool operator==(const IsolationTree&, const IsolationTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

// Builds one tree over rows[indices], consuming `rng`. At each node a
// feature is drawn uniformly among those that vary over the reaching points,
// then a split uniformly inside (min, max). Recursion is preorder, left child
// first. Exposed so that the single-tree structure can be checked directly.
IsolationTree build_isolation_tree(const FeatureMatrix& points,
                                   std::vector<std::uint32_t> indices,
                                   std::size_t depth_limit, CounterRng& rng);

// Chooses min(psi, N) rows without replacement: partial Fisher-Yates on
// 0..N-1. When psi >= N every row is used and no draws are made.
std::vector<std::uint32_t> draw_subsample(std::size_t n_rows, std::size_t psi,
                                          CounterRng& rng);

// Smallest d with 2^d >= psi.
std::size_t depth_limit_for(std::size_t psi);

class IsolationForest {
 public:
  // Tree t draws from stream seed + t: first the subsample, then its splits.
  // Trees are built concurrently. Throws kTooFewPoints for N < 2 and
  // kNonFiniteInput for NaN/Inf. Identical rows yield a degenerate forest
  // that scores everything 0.5.
  static IsolationForest fit(const FeatureMatrix& points, const ForestConfig& cfg);

  // Scores with the forest's own trees; 2^(-E[h(x)] / c(psi)).
  double score(std::span<const double> x) const;
  std::vector<double> score_all(const FeatureMatrix& points) const;
  std::vector<double> score_all_serial(const FeatureMatrix& points) const;

  // Laughter is the inlier class: score < threshold.
  std::vector<bool> classify(const FeatureMatrix& points) const;
  bool is_inlier(double score) const { return score < threshold_; }

  const std::vector<IsolationTree>& trees() const { return trees_; }
  std::size_t psi() const { return psi_; }
  std::size_t dim() const { return dim_; }
  double threshold() const { return threshold_; }
  bool degenerate() const { return degenerate_; }
  const ForestConfig& config() const { return cfg_; }

  // Debug dump: config, threshold and every node. Not a stable format.
  nlohmann::json to_json() const;

 private:
  void check_dim(std::size_t cols) const;

  ForestConfig cfg_;
  std::vector<IsolationTree> trees_;
  std::size_t psi_ = 0;
  std::size_t dim_ = 0;
  double threshold_ = 0.5;
  bool degenerate_ = false;
};

// Threshold for quantile mode: the smallest cut such that at most
// ceil((1 - q) * N) scores are >= it.
double quantile_threshold(std::span<const double> scores, double q);

}  // namespace laughseg

#endif  // LAUGHSEG_IFOREST_HPP_
