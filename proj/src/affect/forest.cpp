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

#include "affect/forest.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "affect/rng.hpp"

namespace affect {

std::string_view target_name(Target t) { return t == Target::Valence ? "valence" : "arousal"; }

std::uint64_t target_seed(std::uint64_t master_seed, Target t) {
  return derive_seed(master_seed, 1 + static_cast<std::uint64_t>(t));
}

std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index) {
  return derive_seed(forest_seed, tree_index);
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("bootstrap sample of size 0");
  Engine engine(seed);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = static_cast<std::size_t>(uniform_index(engine, n));
  return out;
}

double Forest::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

std::vector<double> Forest::predict_rows(MatrixView x) const {
  std::vector<double> sums(x.rows(), 0.0);
  for (const auto& t : trees) {
    for (std::size_t r = 0; r < x.rows(); ++r) sums[r] += t.predict(x.row(r));
  }
  for (auto& s : sums) s /= static_cast<double>(trees.size());
  return sums;
}

Forest fit_forest(MatrixView x, std::span<const double> y, const ForestParams& params, Target target,
                  unsigned threads) {
  if (x.rows() == 0 || y.empty()) throw EmptyDataError();
  if (params.n_trees == 0) throw std::invalid_argument("n_trees must be at least 1");
  params.tree.validate(x.cols());

  const std::size_t n = x.rows();
  std::vector<std::optional<RegressionTree>> slots(params.n_trees);
  auto fit_one = [&](std::size_t i) {
    const std::uint64_t seed = tree_seed(params.master_seed, i);
    TreeParams tp = params.tree;
    tp.seed = derive_seed(seed, 1);
    if (params.bootstrap) {
      const auto rows = bootstrap_sample(n, derive_seed(seed, 0));
      slots[i].emplace(fit_tree(x, y, tp, rows));
    } else {
      slots[i].emplace(fit_tree(x, y, tp));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.n_trees));
  if (threads <= 1) {
    for (std::size_t i = 0; i < params.n_trees; ++i) fit_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < params.n_trees; i = next++) {
          try {
            fit_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  Forest forest;
  forest.params = params;
  forest.target = target;
  forest.trees.reserve(params.n_trees);
  for (auto& s : slots) forest.trees.push_back(std::move(*s));
  return forest;
}

ChecksumMismatch::ChecksumMismatch(std::uint64_t model, std::uint64_t expected)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "model was trained with feature order checksum 0x" << std::hex << model
           << " but this build uses 0x" << expected;
        return os.str();
      }()) {}

void TrainingSet::append(const Dataset& d) {
  for (const auto& r : d.records) {
    features.push_row(r.frame.features.values());
    valence.push_back(r.label.valence);
    arousal.push_back(r.label.arousal);
  }
}

TrainingSet make_training_set(std::span<const Dataset> datasets) {
  TrainingSet set;
  for (const auto& d : datasets) set.append(d);
  return set;
}

MultiOutputModel fit_multioutput(const TrainingSet& data, const ForestParams& params, unsigned threads) {
  if (data.size() == 0) throw EmptyDataError();
  MultiOutputModel model;
  model.master_seed = params.master_seed;
  model.feature_order_checksum = feature_order_checksum();
  for (Target t : {Target::Valence, Target::Arousal}) {
    ForestParams fp = params;
    fp.master_seed = target_seed(params.master_seed, t);
    const auto& y = t == Target::Valence ? data.valence : data.arousal;
    (t == Target::Valence ? model.valence : model.arousal) = fit_forest(data.features.view(), y, fp, t, threads);
  }
  return model;
}

MultiOutputModel fit_multioutput(const Dataset& data, const ForestParams& params, unsigned threads) {
  TrainingSet set;
  set.append(data);
  return fit_multioutput(set, params, threads);
}

void check_feature_order(const MultiOutputModel& m) {
  if (m.feature_order_checksum != feature_order_checksum()) {
    throw ChecksumMismatch(m.feature_order_checksum, feature_order_checksum());
  }
}

AffectPrediction predict_multioutput(const MultiOutputModel& m, const FeatureVector& x) {
  check_feature_order(m);
  return {m.valence.predict(x.values()), m.arousal.predict(x.values())};
}

std::vector<AffectPrediction> predict_multioutput(const MultiOutputModel& m, MatrixView x) {
  check_feature_order(m);
  if (x.cols() != kFeatureCount) throw std::invalid_argument("expected " + std::to_string(kFeatureCount) + " columns");
  const auto v = m.valence.predict_rows(x);
  const auto a = m.arousal.predict_rows(x);
  std::vector<AffectPrediction> out(x.rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = {v[r], a[r]};
  return out;
}

}  // namespace affect
