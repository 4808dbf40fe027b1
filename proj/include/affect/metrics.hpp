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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affect/forest.hpp"
#include "affect/ingest.hpp"

namespace affect {

class MetricError : public std::invalid_argument {
public:
  enum class Kind { LengthMismatch, TooFewSamples, NonFinite, DegenerateInput };

  MetricError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Lin's concordance correlation coefficient with population (1/n) moments:
///   2 s_xy / (s_x^2 + s_y^2 + (mean_x - mean_y)^2)
/// Exactly one constant input yields 0; both constant is DegenerateInput.
double ccc(std::span<const double> predictions, std::span<const double> truth);

/// Challenge summary score: the mean of the two per-target CCCs.
double mean_ccc(double ccc_valence, double ccc_arousal);

struct EvalReport {
  double ccc_valence = 0.0;
  double ccc_arousal = 0.0;
  double mean_ccc = 0.0;
  std::size_t n_frames = 0;
};

EvalReport make_report(double ccc_valence, double ccc_arousal, std::size_t n_frames);

/// Predicted and true values for every evaluated frame, in evaluation order.
struct PredictionDump {
  std::vector<double> valence_pred, arousal_pred;
  std::vector<double> valence_true, arousal_true;
};

PredictionDump predict_all(const MultiOutputModel& model, std::span<const Dataset> data);

/// CCC over the concatenation of every sequence, not a per-sequence average.
EvalReport evaluate(const MultiOutputModel& model, std::span<const Dataset> data);
EvalReport evaluate(const MultiOutputModel& model, const Dataset& data);
EvalReport evaluate(const PredictionDump& dump);

/// Table-style rendering: values to three decimals with trailing zeros dropped.
std::string format_score(double value);
std::string format_report_table(const EvalReport& r, const std::string& method = "Ours");
/// key=value lines: ccc_valence, ccc_arousal, mean_ccc, n_frames (full precision).
std::string format_report_kv(const EvalReport& r);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace affect
