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

#include <doctest.h>

#include <cmath>
#include <random>

#include "affect/metrics.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace affect;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Forest constant_forest(double c, Target t) {
  Forest f;
  f.target = t;
  f.params.n_trees = 1;
  f.trees.emplace_back(std::vector<TreeNode>{TreeNode::leaf(c, 1)});
  return f;
}

}  // namespace

TEST_CASE("ccc: worked examples") {
  const std::vector<double> y = {0.1, 0.5, -0.3};
  CHECK(ccc(y, y) == 1.0);
  CHECK(ccc(std::vector<double>{0, 0, 0}, std::vector<double>{-1, 0, 1}) == 0.0);
  CHECK(ccc(std::vector<double>{-1, 0, 1}, std::vector<double>{0.7, 0.7, 0.7}) == 0.0);

  // Population moments: s_xy = 4/3, s_x^2 = 2/3, s_y^2 = 8/3, bias^2 = 4.
  const std::vector<double> x = {1, 2, 3}, t = {2, 4, 6};
  CHECK(std::abs(ccc(x, t) - 4.0 / 11.0) <= 1e-12);
  CHECK(std::abs(oracle::ccc(x, t) - 4.0 / 11.0) <= 1e-12);
}

TEST_CASE("ccc: errors") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const MetricError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind_of([] { ccc(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}); }) ==
        static_cast<int>(MetricError::Kind::LengthMismatch));
  CHECK(kind_of([] { ccc(std::vector<double>{1}, std::vector<double>{1}); }) ==
        static_cast<int>(MetricError::Kind::TooFewSamples));
  CHECK(kind_of([] { ccc(std::vector<double>{2, 2}, std::vector<double>{3, 3}); }) ==
        static_cast<int>(MetricError::Kind::DegenerateInput));
  CHECK(kind_of([] { ccc(std::vector<double>{NAN, 2}, std::vector<double>{3, 4}); }) ==
        static_cast<int>(MetricError::Kind::NonFinite));
}

TEST_CASE("ccc properties on random vectors") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const auto a = random_vector(rng, n, 0.5 + (rng() % 4));
    auto b = random_vector(rng, n);
    for (std::size_t i = 0; i < n; ++i) b[i] += 0.3 * a[i];

    const double c = ccc(a, b);
    REQUIRE(std::abs(c) <= 1.0);
    REQUIRE(c == doctest::Approx(ccc(b, a)).epsilon(1e-12));
    REQUIRE(c == doctest::Approx(oracle::ccc(a, b)).epsilon(1e-9));

    // Shifting by a constant lowers CCC where Pearson would stay at 1.
    const double shift = 0.1 + static_cast<double>(rng() % 10) / 10.0;
    std::vector<double> shifted(a);
    for (auto& v : shifted) v += shift;
    const double var = oracle::population_variance(a);
    const double expected = 2.0 * var / (2.0 * var + shift * shift);
    REQUIRE(ccc(shifted, a) < 1.0);
    REQUIRE(ccc(shifted, a) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("mean_ccc is the arithmetic mean of the two scores") {
  CHECK(mean_ccc(0.26, 0.19) == 0.225);
  CHECK(mean_ccc(0.31, 0.17) == 0.24);
  for (double x : {-1.0, -0.3, 0.0, 0.42, 1.0}) CHECK(mean_ccc(x, x) == x);
  const auto r = make_report(0.26, 0.19, 10);
  CHECK(r.mean_ccc == 0.225);
  CHECK(r.n_frames == 10);
}

TEST_CASE("report formatting") {
  const auto r = make_report(0.26, 0.19, 100);
  CHECK(format_report_table(r) == "Method | CCC-Valence | CCC-Arousal | PVA\nOurs | 0.26 | 0.19 | 0.225\n");
  CHECK(format_report_kv(make_report(1.0, 1.0, 3)) == "ccc_valence=1\nccc_arousal=1\nmean_ccc=1\nn_frames=3\n");
  CHECK(format_score(1.0) == "1.0");
  CHECK(format_score(-0.0004) == "0.0");
  CHECK(format_score(0.3636) == "0.364");
  CHECK(format_exact(0.1) == "0.1");
  CHECK(std::stod(format_exact(4.0 / 11.0)) == 4.0 / 11.0);
}

TEST_CASE("evaluate") {
  const auto frames = testing::make_frames(120, 21);
  const auto data = testing::to_dataset(frames);

  SUBCASE("constant model scores zero") {
    MultiOutputModel m{constant_forest(0.1, Target::Valence), constant_forest(-0.1, Target::Arousal),
                       feature_order_checksum(), 0};
    const auto r = evaluate(m, data);
    CHECK(r.ccc_valence == 0.0);
    CHECK(r.ccc_arousal == 0.0);
    CHECK(r.mean_ccc == 0.0);
    CHECK(r.n_frames == 120);
  }
  SUBCASE("memorizing model on its training data scores one") {
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.tree.max_features = MaxFeatures::all();
    const auto m = fit_multioutput(data, p);
    const auto r = evaluate(m, data);
    CHECK(r.ccc_valence == 1.0);
    CHECK(r.ccc_arousal == 1.0);
    CHECK(r.mean_ccc == 1.0);
  }
  SUBCASE("pooled over sequences, matches recomputation from dumped predictions") {
    ForestParams p;
    p.n_trees = 10;
    const auto m = fit_multioutput(data, p);
    const std::vector<Dataset> parts = {testing::to_dataset(testing::make_frames(40, 1), "a"),
                                        testing::to_dataset(testing::make_frames(70, 2), "b")};
    const auto dump = predict_all(m, parts);
    REQUIRE(dump.valence_pred.size() == 110);
    const auto r = evaluate(m, parts);
    CHECK(r.n_frames == 110);
    CHECK(r.ccc_valence == doctest::Approx(oracle::ccc(dump.valence_pred, dump.valence_true)).epsilon(1e-12));
    CHECK(r.ccc_arousal == doctest::Approx(oracle::ccc(dump.arousal_pred, dump.arousal_true)).epsilon(1e-12));
    CHECK(r.mean_ccc == (r.ccc_valence + r.ccc_arousal) / 2.0);
  }
  SUBCASE("checksum mismatch propagates") {
    MultiOutputModel m{constant_forest(0.1, Target::Valence), constant_forest(-0.1, Target::Arousal), 1, 0};
    CHECK_THROWS_AS(evaluate(m, data), ChecksumMismatch);
  }
}
