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
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "affect/featvec.hpp"
#include "affect/ingest.hpp"
#include "affect/tree.hpp"

namespace affect {

inline constexpr std::size_t kDefaultTreeCount = 250;

enum class Target : std::uint8_t { Valence = 0, Arousal = 1 };

std::string_view target_name(Target t);

struct ForestParams {
  std::size_t n_trees = kDefaultTreeCount;
  bool bootstrap = true;
  TreeParams tree;
  std::uint64_t master_seed = 0;

  bool operator==(const ForestParams&) const = default;
};

/// Seeding scheme (frozen; model files record it as kSeedSchemeId):
///   forest seed for a target  = derive_seed(master, 1 + target)
///   seed of tree i            = derive_seed(forest seed, i)
///   bootstrap draw of tree i  = bootstrap_sample(n, derive_seed(tree seed, 0))
///   feature draws of tree i   = TreeParams::seed = derive_seed(tree seed, 1)
inline constexpr std::uint32_t kSeedSchemeId = 1;

std::uint64_t target_seed(std::uint64_t master_seed, Target t);
std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index);

/// n indices drawn uniformly with replacement from [0, n).
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed);

struct Forest {
  std::vector<RegressionTree> trees;
  ForestParams params;
  Target target = Target::Valence;

  /// Mean of the per-tree predictions, accumulated in ascending tree order.
  double predict(std::span<const double> x) const;
  /// predict() for every row of `x`, tree by tree. Results are bit-identical
  /// to calling predict() row by row.
  std::vector<double> predict_rows(MatrixView x) const;

  bool operator==(const Forest&) const = default;
};

/// Fits params.n_trees trees on `threads` workers (0 = hardware concurrency).
/// The result does not depend on the thread count.
Forest fit_forest(MatrixView x, std::span<const double> y, const ForestParams& params, Target target,
                  unsigned threads = 1);

inline double predict_forest(const Forest& f, std::span<const double> x) { return f.predict(x); }

class ChecksumMismatch : public std::runtime_error {
public:
  ChecksumMismatch(std::uint64_t model, std::uint64_t expected);
};

struct MultiOutputModel {
  Forest valence;
  Forest arousal;
  std::uint64_t feature_order_checksum = 0;
  std::uint64_t master_seed = 0;

  bool operator==(const MultiOutputModel&) const = default;
};

/// Training matrix and both target columns extracted from datasets.
struct TrainingSet {
  FeatureMatrix features{kFeatureCount};
  std::vector<double> valence;
  std::vector<double> arousal;

  std::size_t size() const { return valence.size(); }
  void append(const Dataset& d);
};

TrainingSet make_training_set(std::span<const Dataset> datasets);

/// One independent forest per target; per-target seeds follow target_seed().
/// params.master_seed is the master seed. Throws EmptyDataError.
MultiOutputModel fit_multioutput(const TrainingSet& data, const ForestParams& params, unsigned threads = 1);
MultiOutputModel fit_multioutput(const Dataset& data, const ForestParams& params, unsigned threads = 1);

struct AffectPrediction {
  double valence = 0.0;
  double arousal = 0.0;

  bool operator==(const AffectPrediction&) const = default;
};

/// Throws ChecksumMismatch if the model was trained under another feature order.
void check_feature_order(const MultiOutputModel& m);

AffectPrediction predict_multioutput(const MultiOutputModel& m, const FeatureVector& x);
/// Row-wise predictions for a matrix with kFeatureCount columns.
std::vector<AffectPrediction> predict_multioutput(const MultiOutputModel& m, MatrixView x);

}  // namespace affect
