/*
   Copyright 2026 The affectrf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "affect/tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <utility>

#include "affect/rng.hpp"

namespace affect {

MatrixView::MatrixView(std::span<const double> data, std::size_t cols) : data_(data), cols_(cols) {
  if (cols == 0 && !data.empty()) throw std::invalid_argument("matrix with zero columns");
  if (cols != 0 && data.size() % cols != 0) throw std::invalid_argument("matrix data is not a whole number of rows");
}

FeatureMatrix::FeatureMatrix(std::size_t cols, std::vector<double> data) : cols_(cols), data_(std::move(data)) {
  MatrixView check(data_, cols_);
  (void)check;
}

void FeatureMatrix::push_row(std::span<const double> row) {
  if (row.size() != cols_) throw std::invalid_argument("row width does not match matrix");
  data_.insert(data_.end(), row.begin(), row.end());
}

MaxFeatures MaxFeatures::parse(std::string_view text) {
  if (text == "all") return all();
  if (text == "sqrt") return sqrt();
  if (text == "third") return third();
  std::size_t k = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || end != text.data() + text.size() || k == 0) {
    throw std::invalid_argument("max-features must be all, sqrt, third or a positive integer, got '" +
                                std::string(text) + "'");
  }
  return fixed(k);
}

std::string MaxFeatures::to_string() const {
  switch (mode) {
    case Mode::All: return "all";
    case Mode::Sqrt: return "sqrt";
    case Mode::Third: return "third";
    case Mode::Fixed: return std::to_string(k);
  }
  return "?";
}

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  std::size_t m = n_features;
  switch (mode) {
    case Mode::All: m = n_features; break;
    case Mode::Sqrt: m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features)))); break;
    case Mode::Third: m = n_features / 3; break;
    case Mode::Fixed: m = k; break;
  }
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(n_features, 1));
}

void TreeParams::validate(std::size_t n_features) const {
  if (max_depth && *max_depth == 0) throw std::invalid_argument("max_depth must be positive");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be at least 2");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be at least 1");
  if (max_features.mode == MaxFeatures::Mode::Fixed && (max_features.k == 0 || max_features.k > n_features)) {
    throw std::invalid_argument("max_features k=" + std::to_string(max_features.k) + " exceeds " +
                                std::to_string(n_features) + " features");
  }
}

namespace {

// Reusable buffers for split search; one per fitting thread.
class SplitSearch {
public:
  std::optional<Split> run(MatrixView x, std::span<const double> y, std::span<const std::size_t> rows,
                           std::span<const std::size_t> sorted_features, std::size_t min_leaf) {
    const std::size_t n = rows.size();
    if (n < 2 || n < 2 * min_leaf) return std::nullopt;

    double mean = 0.0;
    for (auto r : rows) mean += y[r];
    mean /= static_cast<double>(n);

    centered_.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      centered_[i] = y[rows[i]] - mean;
      total += centered_[i];
    }
    const double nd = static_cast<double>(n);
    const double parent_term = total * total / nd;

    std::optional<Split> best;
    double best_gain = kGainTolerance;
    pairs_.resize(n);
    for (auto f : sorted_features) {
      for (std::size_t i = 0; i < n; ++i) pairs_[i] = {x.at(rows[i], f), centered_[i]};
      std::sort(pairs_.begin(), pairs_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (pairs_.front().first == pairs_.back().first) continue;

      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += pairs_[i].second;
        if (pairs_[i].first == pairs_[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf) continue;
        if (n_right < min_leaf) break;
        const double right_sum = total - left_sum;
        const double gain = (left_sum * left_sum / static_cast<double>(n_left) +
                             right_sum * right_sum / static_cast<double>(n_right) - parent_term) /
                            nd;
        if (gain > best_gain + (best ? kGainTolerance : 0.0)) {
          best_gain = gain;
          best = Split{f, midpoint(pairs_[i].first, pairs_[i + 1].first), gain};
        }
      }
    }
    return best;
  }

private:
  static double midpoint(double lo, double hi) {
    double t = (lo + hi) / 2.0;
    if (!std::isfinite(t)) t = lo + (hi - lo) / 2.0;
    return t < hi ? t : lo;
  }

  std::vector<double> centered_;
  std::vector<std::pair<double, double>> pairs_;
};

std::vector<std::size_t> sorted_copy(std::span<const std::size_t> features, std::size_t n_cols) {
  std::vector<std::size_t> out(features.begin(), features.end());
  for (auto f : out) {
    if (f >= n_cols) throw std::out_of_range("candidate feature index out of range");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class TreeBuilder {
public:
  TreeBuilder(MatrixView x, std::span<const double> y, const TreeParams& params)
      : x_(x), y_(y), params_(params), engine_(params.seed), subset_size_(params.max_features.resolve(x.cols())) {
    pool_.resize(x.cols());
  }

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    struct Pending {
      std::size_t begin, end, depth;
      std::size_t parent;  // index into nodes_, or npos for the root
      bool is_right;
    };
    constexpr auto npos = static_cast<std::size_t>(-1);
    std::vector<Pending> stack{{0, rows_.size(), 0, npos, false}};

    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      const auto index = static_cast<std::uint32_t>(nodes_.size());
      if (p.parent != npos) {
        if (p.is_right) nodes_[p.parent].right = index;
        else nodes_[p.parent].left = index;
      }

      std::span<std::size_t> rows(rows_.data() + p.begin, p.end - p.begin);
      auto split = try_split(rows, p.depth);
      if (!split) {
        nodes_.push_back(make_leaf(rows));
        continue;
      }
      const auto mid = std::partition(rows.begin(), rows.end(), [&](std::size_t r) {
        return x_.at(r, split->feature) <= split->threshold;
      });
      const std::size_t cut = p.begin + static_cast<std::size_t>(mid - rows.begin());
      nodes_.push_back(TreeNode::internal(static_cast<std::uint32_t>(split->feature), split->threshold, 0, 0));
      // Right pushed first so the left subtree is emitted first (pre-order).
      stack.push_back({cut, p.end, p.depth + 1, index, true});
      stack.push_back({p.begin, cut, p.depth + 1, index, false});
    }
    return std::move(nodes_);
  }

private:
  std::optional<Split> try_split(std::span<const std::size_t> rows, std::size_t depth) {
    if (params_.max_depth && depth >= *params_.max_depth) return std::nullopt;
    if (rows.size() < params_.min_samples_split || rows.size() < 2) return std::nullopt;
    const double first = y_[rows.front()];
    if (std::all_of(rows.begin(), rows.end(), [&](std::size_t r) { return y_[r] == first; })) {
      return std::nullopt;
    }
    return search_.run(x_, y_, rows, draw_features(), params_.min_samples_leaf);
  }

  // Partial Fisher-Yates over 0..d-1, returned in ascending order.
  std::span<const std::size_t> draw_features() {
    const std::size_t d = x_.cols();
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    if (subset_size_ >= d) return pool_;
    for (std::size_t i = 0; i < subset_size_; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_index(engine_, d - i));
      std::swap(pool_[i], pool_[j]);
    }
    std::sort(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(subset_size_));
    return std::span<const std::size_t>(pool_.data(), subset_size_);
  }

  TreeNode make_leaf(std::span<const std::size_t> rows) const {
    double sum = 0.0;
    double lo = y_[rows.front()];
    double hi = lo;
    for (auto r : rows) {
      sum += y_[r];
      lo = std::min(lo, y_[r]);
      hi = std::max(hi, y_[r]);
    }
    const double mean = std::clamp(sum / static_cast<double>(rows.size()), lo, hi);
    return TreeNode::leaf(mean, rows.size());
  }

  MatrixView x_;
  std::span<const double> y_;
  const TreeParams& params_;
  Engine engine_;
  std::size_t subset_size_;
  std::vector<std::size_t> pool_;
  std::vector<std::size_t> rows_;
  std::vector<TreeNode> nodes_;
  SplitSearch search_;
};

}  // namespace

std::optional<Split> best_split(MatrixView x, std::span<const double> y, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features, std::size_t min_samples_leaf) {
  if (y.size() != x.rows()) throw std::invalid_argument("target length does not match feature rows");
  const auto features = sorted_copy(candidate_features, x.cols());
  if (features.empty()) return std::nullopt;
  SplitSearch search;
  return search.run(x, y, rows, features, std::max<std::size_t>(min_samples_leaf, 1));
}

std::optional<Split> best_split(MatrixView x, std::span<const double> y,
                                std::span<const std::size_t> candidate_features, std::size_t min_samples_leaf) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return best_split(x, y, rows, candidate_features, min_samples_leaf);
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  if (n == 0) throw CorruptTreeError("tree has no nodes");
  std::vector<bool> has_parent(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (node.is_leaf) {
      if (node.n_samples == 0) throw CorruptTreeError("leaf " + std::to_string(i) + " has no samples");
      continue;
    }
    for (auto child : {node.left, node.right}) {
      if (child <= i || child >= n) {
        throw CorruptTreeError("node " + std::to_string(i) + " has invalid child index " + std::to_string(child));
      }
      if (has_parent[child]) throw CorruptTreeError("node " + std::to_string(child) + " has two parents");
      has_parent[child] = true;
    }
    if (node.left == node.right) throw CorruptTreeError("node " + std::to_string(i) + " has identical children");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!has_parent[i]) throw CorruptTreeError("node " + std::to_string(i) + " is unreachable");
  }
}

const TreeNode& RegressionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf) {
    node = &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    max_depth = std::max(max_depth, depth[i]);
    if (!nodes_[i].is_leaf) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return max_depth;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf; }));
}

RegressionTree fit_tree(MatrixView x, std::span<const double> y, const TreeParams& params,
                        std::span<const std::size_t> rows) {
  if (x.rows() == 0 || y.empty()) throw EmptyDataError();
  if (y.size() != x.rows()) throw std::invalid_argument("target length does not match feature rows");
  params.validate(x.cols());

  std::vector<std::size_t> sample;
  if (rows.empty()) {
    sample.resize(x.rows());
    std::iota(sample.begin(), sample.end(), std::size_t{0});
  } else {
    sample.assign(rows.begin(), rows.end());
    for (auto r : sample) {
      if (r >= x.rows()) throw std::out_of_range("sample row index out of range");
    }
  }
  TreeBuilder builder(x, y, params);
  return RegressionTree(builder.build(std::move(sample)));
}

}  // namespace affect
