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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace affect {

/// Gains at or below this are treated as zero, and two gains closer than this
/// are treated as tied.
inline constexpr double kGainTolerance = 1e-12;

/// Read-only row-major view over an n x d matrix of features.
class MatrixView {
public:
  MatrixView() = default;
  MatrixView(std::span<const double> data, std::size_t cols);

  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }
  std::span<const double> row(std::size_t r) const { return data_.subspan(r * cols_, cols_); }

private:
  std::span<const double> data_;
  std::size_t cols_ = 0;
};

/// Owning row-major matrix.
class FeatureMatrix {
public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}
  FeatureMatrix(std::size_t cols, std::vector<double> data);

  void push_row(std::span<const double> row);
  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
  double at(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }
  std::span<const double> row(std::size_t r) const { return view().row(r); }
  MatrixView view() const { return MatrixView(data_, cols_); }

private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// How many features a node considers when searching for a split.
struct MaxFeatures {
  enum class Mode : std::uint8_t { All = 0, Sqrt = 1, Third = 2, Fixed = 3 };

  Mode mode = Mode::Third;
  std::size_t k = 0;  // only for Fixed

  static MaxFeatures all() { return {Mode::All, 0}; }
  static MaxFeatures sqrt() { return {Mode::Sqrt, 0}; }
  static MaxFeatures third() { return {Mode::Third, 0}; }
  static MaxFeatures fixed(std::size_t k) { return {Mode::Fixed, k}; }

  /// Accepts "all", "sqrt", "third" or a positive integer.
  static MaxFeatures parse(std::string_view text);
  std::string to_string() const;

  /// Subset size for a d-feature problem; sqrt and third round down, min 1.
  std::size_t resolve(std::size_t n_features) const;

  bool operator==(const MaxFeatures&) const = default;
};

struct TreeParams {
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::third();
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for out-of-range knobs.
  void validate(std::size_t n_features) const;

  bool operator==(const TreeParams&) const = default;
};

class EmptyDataError : public std::invalid_argument {
public:
  EmptyDataError() : std::invalid_argument("cannot fit on an empty dataset") {}
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;  // reduction in population variance of the targets
};

/// Exhaustive CART search over `candidate_features` for the subset `rows`.
/// Thresholds are midpoints between consecutive distinct values and samples
/// go left iff x <= threshold. Splits leaving fewer than `min_samples_leaf`
/// samples on a side are skipped. Ties go to the lowest feature index, then
/// the lowest threshold. Returns nullopt when nothing beats kGainTolerance.
std::optional<Split> best_split(MatrixView x, std::span<const double> y, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features,
                                std::size_t min_samples_leaf = 1);

/// best_split over every row of `x`.
std::optional<Split> best_split(MatrixView x, std::span<const double> y,
                                std::span<const std::size_t> candidate_features,
                                std::size_t min_samples_leaf = 1);

struct TreeNode {
  bool is_leaf = true;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;
  std::uint64_t n_samples = 0;

  static TreeNode leaf(double value, std::uint64_t n_samples) {
    return {true, 0, 0.0, 0, 0, value, n_samples};
  }
  static TreeNode internal(std::uint32_t feature, double threshold, std::uint32_t left, std::uint32_t right) {
    return {false, feature, threshold, left, right, 0.0, 0};
  }

  bool operator==(const TreeNode&) const = default;
};

class CorruptTreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Regression tree stored as a pre-order node array; node 0 is the root and
/// every child index is greater than its parent's.
class RegressionTree {
public:
  /// Throws CorruptTreeError unless `nodes` forms a single pre-order tree.
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  const TreeNode& leaf_for(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return leaf_for(x).value; }

  std::size_t depth() const;
  std::size_t leaf_count() const;

  bool operator==(const RegressionTree&) const = default;

private:
  std::vector<TreeNode> nodes_;
};

/// Greedy CART induction on `rows` (all rows when empty; duplicates allowed).
/// Leaf values are target means. Throws EmptyDataError.
RegressionTree fit_tree(MatrixView x, std::span<const double> y, const TreeParams& params,
                        std::span<const std::size_t> rows = {});

inline double predict_tree(const RegressionTree& tree, std::span<const double> x) { return tree.predict(x); }

}  // namespace affect
