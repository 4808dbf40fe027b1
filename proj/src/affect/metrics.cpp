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

#include "affect/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace affect {

namespace {

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double ccc(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size()) {
    throw MetricError(MetricError::Kind::LengthMismatch,
                      "ccc: " + std::to_string(predictions.size()) + " predictions vs " +
                          std::to_string(truth.size()) + " targets");
  }
  if (predictions.size() < 2) throw MetricError(MetricError::Kind::TooFewSamples, "ccc needs at least 2 values");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(predictions.begin(), predictions.end(), finite) ||
      !std::all_of(truth.begin(), truth.end(), finite)) {
    throw MetricError(MetricError::Kind::NonFinite, "ccc: non-finite input");
  }
  const bool pred_constant = constant(predictions);
  const bool truth_constant = constant(truth);
  if (pred_constant && truth_constant) {
    throw MetricError(MetricError::Kind::DegenerateInput, "ccc: both sequences are constant");
  }
  if (pred_constant || truth_constant) return 0.0;

  const double n = static_cast<double>(predictions.size());
  const double mx = mean_of(predictions);
  const double my = mean_of(truth);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double dx = predictions[i] - mx;
    const double dy = truth[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double bias = mx - my;
  return std::clamp(2.0 * sxy / (sxx + syy + bias * bias), -1.0, 1.0);
}

double mean_ccc(double ccc_valence, double ccc_arousal) { return (ccc_valence + ccc_arousal) / 2.0; }

EvalReport make_report(double ccc_valence, double ccc_arousal, std::size_t n_frames) {
  return {ccc_valence, ccc_arousal, mean_ccc(ccc_valence, ccc_arousal), n_frames};
}

PredictionDump predict_all(const MultiOutputModel& model, std::span<const Dataset> data) {
  check_feature_order(model);
  PredictionDump dump;
  FeatureMatrix x(kFeatureCount);
  for (const auto& d : data) {
    for (const auto& r : d.records) {
      x.push_row(r.frame.features.values());
      dump.valence_true.push_back(r.label.valence);
      dump.arousal_true.push_back(r.label.arousal);
    }
  }
  for (const auto& p : predict_multioutput(model, x.view())) {
    dump.valence_pred.push_back(p.valence);
    dump.arousal_pred.push_back(p.arousal);
  }
  return dump;
}

EvalReport evaluate(const PredictionDump& dump) {
  return make_report(ccc(dump.valence_pred, dump.valence_true), ccc(dump.arousal_pred, dump.arousal_true),
                     dump.valence_pred.size());
}

EvalReport evaluate(const MultiOutputModel& model, std::span<const Dataset> data) {
  return evaluate(predict_all(model, data));
}

EvalReport evaluate(const MultiOutputModel& model, const Dataset& data) {
  return evaluate(model, std::span<const Dataset>(&data, 1));
}

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string format_report_table(const EvalReport& r, const std::string& method) {
  std::ostringstream os;
  os << "Method | CCC-Valence | CCC-Arousal | PVA\n"
     << method << " | " << format_score(r.ccc_valence) << " | " << format_score(r.ccc_arousal) << " | "
     << format_score(r.mean_ccc) << "\n";
  return os.str();
}

std::string format_report_kv(const EvalReport& r) {
  std::ostringstream os;
  os << "ccc_valence=" << format_exact(r.ccc_valence) << "\n"
     << "ccc_arousal=" << format_exact(r.ccc_arousal) << "\n"
     << "mean_ccc=" << format_exact(r.mean_ccc) << "\n"
     << "n_frames=" << r.n_frames << "\n";
  return os.str();
}

std::string format_exact(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace affect
