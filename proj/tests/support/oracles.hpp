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

// Reference computations written straight from the definitions. They share
// no code with the library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

namespace affect::oracle {

inline double population_variance(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

struct CandidateSplit {
  std::size_t feature;
  double threshold;
  double gain;
};

/// Every (feature, midpoint) split of `rows` (row-major, `cols` wide) that
/// leaves at least `min_leaf` samples on both sides, with its variance gain.
/// Output is ordered by feature, then threshold.
inline std::vector<CandidateSplit> enumerate_splits(const std::vector<double>& rows, std::size_t cols,
                                                    const std::vector<double>& y, std::size_t min_leaf = 1) {
  const std::size_t n = y.size();
  const double parent = population_variance(y);
  std::vector<CandidateSplit> out;
  for (std::size_t f = 0; f < cols; ++f) {
    std::set<double> distinct;
    for (std::size_t i = 0; i < n; ++i) distinct.insert(rows[i * cols + f]);
    std::vector<double> values(distinct.begin(), distinct.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double t = (values[k] + values[k + 1]) / 2.0;
      std::vector<double> left, right;
      for (std::size_t i = 0; i < n; ++i) (rows[i * cols + f] <= t ? left : right).push_back(y[i]);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      const double nl = static_cast<double>(left.size()), nr = static_cast<double>(right.size());
      const double gain = parent - nl / static_cast<double>(n) * population_variance(left) -
                          nr / static_cast<double>(n) * population_variance(right);
      out.push_back({f, t, gain});
    }
  }
  return out;
}

/// CCC from the textbook formula with 1/n moments, straight-line.
inline double ccc(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, cxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cxy += (x[i] - mx) * (y[i] - my);
  }
  vx /= n;
  vy /= n;
  cxy /= n;
  return 2 * cxy / (vx + vy + (mx - my) * (mx - my));
}

}  // namespace affect::oracle
