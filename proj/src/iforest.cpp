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

#include "laughseg/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix data size does not match shape");
  }
}

void standardize(FeatureMatrix& points) {
  const std::size_t n = points.rows();
  if (n == 0) return;
  for (std::size_t j = 0; j < points.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (points(i, j) - mean) * (points(i, j) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      points(i, j) = sd > 0.0 ? (points(i, j) - mean) / sd : 0.0;
    }
  }
}

ThresholdMode ThresholdMode::parse(const std::string& text) {
  if (text == "auto") return automatic();
  const std::string prefix = "quantile:";
  if (text.rfind(prefix, 0) == 0) {
    double q = 0.0;
    try {
      std::size_t used = 0;
      q = std::stod(text.substr(prefix.size()), &used);
      if (used != text.size() - prefix.size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "bad quantile in '" + text + "'");
    }
    ThresholdMode m = quantile(q);
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile must be in (0, 1)");
    return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "threshold mode must be auto or quantile:Q");
}

std::string ThresholdMode::to_string() const {
  if (kind == Kind::kAuto) return "auto";
  std::string s = std::to_string(q);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  return "quantile:" + s;
}

void ForestConfig::validate() const {
  if (n_trees < 1) throw Error(ErrorCode::kInvalidArgument, "n_trees must be >= 1");
  if (subsample < 2) throw Error(ErrorCode::kInvalidArgument, "subsample must be >= 2");
  if (threshold.kind == ThresholdMode::Kind::kQuantile && !(threshold.q > 0.0 && threshold.q < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile must be in (0, 1)");
  }
}

double c_factor(std::size_t n) {
  if (n <= 1) return 0.0;
  constexpr double kEulerGamma = 0.5772156649;
  const double m = static_cast<double>(n - 1);
  return 2.0 * (std::log(m) + kEulerGamma) - 2.0 * m / static_cast<double>(n);
}

std::size_t depth_limit_for(std::size_t psi) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < psi) ++d;
  return d;
}

std::size_t IsolationTree::depth(std::span<const double> x) const {
  std::size_t d = 0;
  std::uint32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const TreeNode& n = nodes_[id];
    id = x[static_cast<std::size_t>(n.feature)] < n.split ? n.left : n.right;
    ++d;
  }
  return d;
}

double IsolationTree::path_length(std::span<const double> x) const {
  std::size_t d = 0;
  std::uint32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const TreeNode& n = nodes_[id];
    id = x[static_cast<std::size_t>(n.feature)] < n.split ? n.left : n.right;
    ++d;
  }
  return static_cast<double>(d) + c_factor(nodes_[id].size);
}

std::size_t IsolationTree::max_depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t best = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, depth[i]);
    if (nodes_[i].feature >= 0) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return best;
}

std::vector<std::uint32_t> draw_subsample(std::size_t n_rows, std::size_t psi, CounterRng& rng) {
  std::vector<std::uint32_t> idx(n_rows);
  std::iota(idx.begin(), idx.end(), 0u);
  if (psi >= n_rows) return idx;
  for (std::size_t i = 0; i < psi; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n_rows - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(psi);
  return idx;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& points, std::size_t depth_limit, CounterRng& rng)
      : points_(points), depth_limit_(depth_limit), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::uint32_t> indices) {
    grow(std::span<std::uint32_t>(indices), 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(std::span<std::uint32_t> idx, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(TreeNode{-1, 0.0, 0, 0, static_cast<std::uint32_t>(idx.size())});
    if (depth >= depth_limit_ || idx.size() <= 1) return id;

    const std::size_t dim = points_.cols();
    lo_.assign(dim, std::numeric_limits<double>::infinity());
    hi_.assign(dim, -std::numeric_limits<double>::infinity());
    for (std::uint32_t r : idx) {
      const auto row = points_.row(r);
      for (std::size_t j = 0; j < dim; ++j) {
        lo_[j] = std::min(lo_[j], row[j]);
        hi_[j] = std::max(hi_[j], row[j]);
      }
    }
    candidates_.clear();
    for (std::size_t j = 0; j < dim; ++j) {
      if (lo_[j] < hi_[j]) candidates_.push_back(static_cast<std::uint32_t>(j));
    }
    if (candidates_.empty()) return id;

    const std::uint32_t f = candidates_[rng_.below(candidates_.size())];
    const double lo = lo_[f];
    const double hi = hi_[f];
    double split = lo + rng_.uniform_open() * (hi - lo);
    if (split >= hi) split = std::nextafter(hi, lo);
    if (!(split > lo)) split = hi;  // lo and hi are adjacent doubles

    auto mid = std::partition(idx.begin(), idx.end(),
                              [&](std::uint32_t r) { return points_(r, f) < split; });
    const auto n_left = static_cast<std::size_t>(mid - idx.begin());
    nodes_[id].feature = static_cast<std::int32_t>(f);
    nodes_[id].split = split;
    const std::uint32_t left = grow(idx.first(n_left), depth + 1);
    const std::uint32_t right = grow(idx.subspan(n_left), depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  const FeatureMatrix& points_;
  std::size_t depth_limit_;
  CounterRng& rng_;
  std::vector<TreeNode> nodes_;
  std::vector<double> lo_, hi_;
  std::vector<std::uint32_t> candidates_;
};

bool all_rows_identical(const FeatureMatrix& points) {
  const auto first = points.row(0);
  for (std::size_t i = 1; i < points.rows(); ++i) {
    const auto r = points.row(i);
    if (!std::equal(first.begin(), first.end(), r.begin())) return false;
  }
  return true;
}

}  // namespace

IsolationTree build_isolation_tree(const FeatureMatrix& points, std::vector<std::uint32_t> indices,
                                   std::size_t depth_limit, CounterRng& rng) {
  TreeBuilder builder(points, depth_limit, rng);
  return IsolationTree(builder.build(std::move(indices)));
}

double quantile_threshold(std::span<const double> scores, double q) {
  if (scores.empty()) return 0.5;
  std::vector<double> desc(scores.begin(), scores.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const double allowed = std::ceil((1.0 - q) * static_cast<double>(desc.size()) - 1e-9);
  const auto m = static_cast<std::size_t>(std::max(0.0, allowed));
  if (m >= desc.size()) return desc.back();
  return std::nextafter(desc[m], std::numeric_limits<double>::infinity());
}

IsolationForest IsolationForest::fit(const FeatureMatrix& points, const ForestConfig& cfg) {
  cfg.validate();
  if (points.rows() < 2) {
    throw Error(ErrorCode::kTooFewPoints, "need at least 2 points, got " + std::to_string(points.rows()));
  }
  if (points.cols() < 1) throw Error(ErrorCode::kDimensionMismatch, "points have no features");
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (double v : points.row(i)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteInput, "row " + std::to_string(i) + " is not finite");
      }
    }
  }

  IsolationForest forest;
  forest.cfg_ = cfg;
  forest.dim_ = points.cols();
  forest.psi_ = std::min(cfg.subsample, points.rows());
  if (all_rows_identical(points)) {
    forest.degenerate_ = true;
  } else {
    const std::size_t limit = depth_limit_for(forest.psi_);
    forest.trees_.resize(cfg.n_trees);
    const auto n_trees = static_cast<std::int64_t>(cfg.n_trees);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < n_trees; ++t) {
      CounterRng rng(cfg.seed + static_cast<std::uint64_t>(t));
      auto rows = draw_subsample(points.rows(), forest.psi_, rng);
      forest.trees_[static_cast<std::size_t>(t)] =
          build_isolation_tree(points, std::move(rows), limit, rng);
    }
  }

  if (cfg.threshold.kind == ThresholdMode::Kind::kQuantile) {
    forest.threshold_ = quantile_threshold(forest.score_all(points), cfg.threshold.q);
  } else {
    forest.threshold_ = 0.5;
  }
  return forest;
}

void IsolationForest::check_dim(std::size_t cols) const {
  if (cols != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "forest dim " + std::to_string(dim_) + ", query dim " + std::to_string(cols));
  }
}

double IsolationForest::score(std::span<const double> x) const {
  check_dim(x.size());
  if (degenerate_) return 0.5;
  double total = 0.0;
  for (const IsolationTree& t : trees_) total += t.path_length(x);
  const double mean = total / static_cast<double>(trees_.size());
  return std::exp2(-mean / c_factor(psi_));
}

std::vector<double> IsolationForest::score_all(const FeatureMatrix& points) const {
  check_dim(points.cols());
  std::vector<double> out(points.rows());
  const auto n = static_cast<std::int64_t>(points.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = score(points.row(static_cast<std::size_t>(i)));
  }
  return out;
}

std::vector<double> IsolationForest::score_all_serial(const FeatureMatrix& points) const {
  check_dim(points.cols());
  std::vector<double> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = score(points.row(i));
  return out;
}

std::vector<bool> IsolationForest::classify(const FeatureMatrix& points) const {
  const auto scores = score_all(points);
  std::vector<bool> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = is_inlier(scores[i]);
  return out;
}

nlohmann::json IsolationForest::to_json() const {
  nlohmann::json j;
  j["format"] = "laughseg-iforest";
  j["version"] = 1;
  j["config"] = {{"n_trees", cfg_.n_trees},
                 {"subsample", cfg_.subsample},
                 {"seed", cfg_.seed},
                 {"threshold_mode", cfg_.threshold.to_string()}};
  j["psi"] = psi_;
  j["dim"] = dim_;
  j["threshold"] = threshold_;
  j["degenerate"] = degenerate_;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const IsolationTree& t : trees_) {
    auto nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes()) {
      if (n.feature < 0) {
        nodes.push_back({{"size", n.size}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"split", n.split},
                         {"left", n.left},
                         {"right", n.right},
                         {"size", n.size}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  return j;
}

}  // namespace laughseg
