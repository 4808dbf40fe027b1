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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affect/forest.hpp"

namespace affect::cli {

enum class Mode { Train, Predict, Evaluate };

struct RunConfig {
  Mode mode = Mode::Train;
  std::filesystem::path feature_dir;
  std::filesystem::path annotation_dir;  // train / evaluate
  std::filesystem::path model_path;
  std::filesystem::path output_path;  // predict: directory; evaluate: report file (optional)
  ForestParams params;
  std::optional<double> min_confidence;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Throws std::invalid_argument naming the first missing path.
void check_paths(const RunConfig& cfg);

struct SequenceFiles {
  std::string id;  // file stem
  std::filesystem::path features;
  std::filesystem::path annotations;
};

/// `<stem>.csv` files in the feature dir, sorted by stem, each paired with
/// `<stem>.txt` in the annotation dir when one is given.
std::vector<SequenceFiles> discover_sequences(const std::filesystem::path& feature_dir,
                                              const std::filesystem::path& annotation_dir = {});

// Each command returns a process exit status and never throws.
int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace affect::cli
