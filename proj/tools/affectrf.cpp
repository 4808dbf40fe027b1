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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "affect/cli/commands.hpp"

using affect::cli::Mode;
using affect::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Valence/arousal random forest on OpenFace features"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string feature_dir, annotation_dir, model_path, output_path;
  std::optional<std::size_t> max_depth;
  std::optional<double> min_confidence;
  std::string max_features = "third";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--features", feature_dir, "Directory of OpenFace <sequence>.csv files")->required();
    cmd->add_option("--model", model_path, "Model file")->required();
    cmd->add_option("--min-confidence", min_confidence, "Drop frames below this detector confidence")
        ->check(CLI::Range(0.0, 1.0));
  };

  auto* train = app.add_subcommand("train", "Fit the two-target forest model");
  add_common(train);
  train->add_option("--annotations", annotation_dir, "Directory of <sequence>.txt label files")->required();
  train->add_option("--trees", cfg.params.n_trees, "Trees per target")
      ->default_val(affect::kDefaultTreeCount)
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", cfg.params.master_seed, "Master seed")->default_val(0);
  train->add_option("--max-depth", max_depth, "Maximum tree depth (default unlimited)")->check(CLI::PositiveNumber);
  train->add_option("--min-split", cfg.params.tree.min_samples_split, "Minimum samples to split a node")
      ->default_val(2)
      ->check(CLI::Range(2, 1 << 30));
  train->add_option("--min-leaf", cfg.params.tree.min_samples_leaf, "Minimum samples per leaf")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  train->add_option("--max-features", max_features, "Features tried per split: all|sqrt|third|K")
      ->default_val("third");
  train->add_flag("!--no-bootstrap", cfg.params.bootstrap, "Fit every tree on the full training set");
  train->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->default_val(0);
  train->add_option("--out", output_path, "Unused; accepted for symmetry");

  auto* predict = app.add_subcommand("predict", "Write per-frame predictions");
  add_common(predict);
  predict->add_option("--out", output_path, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Report CCC against annotations");
  add_common(evaluate);
  evaluate->add_option("--annotations", annotation_dir, "Directory of <sequence>.txt label files")->required();
  evaluate->add_option("--out", output_path, "Write the key=value report here");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.params.tree.max_features = affect::MaxFeatures::parse(max_features);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cfg.params.tree.max_depth = max_depth;
  cfg.min_confidence = min_confidence;
  cfg.feature_dir = feature_dir;
  cfg.annotation_dir = annotation_dir;
  cfg.model_path = model_path;
  cfg.output_path = output_path;
  if (train->parsed()) cfg.mode = Mode::Train;
  else if (predict->parsed()) cfg.mode = Mode::Predict;
  else cfg.mode = Mode::Evaluate;
  if (cfg.mode == Mode::Train) cfg.output_path.clear();

  return affect::cli::run(cfg, std::cout, std::cerr);
}
