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

#include "affect/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "affect/ingest.hpp"
#include "affect/metrics.hpp"
#include "affect/model_io.hpp"

namespace affect::cli {

namespace fs = std::filesystem;

namespace {

struct LoadedSequences {
  std::vector<Dataset> datasets;
  std::size_t total = 0;
  std::size_t failed = 0;
  std::size_t unlabeled = 0;
  std::size_t low_confidence = 0;
  std::size_t unpaired = 0;

  std::size_t kept() const {
    std::size_t n = 0;
    for (const auto& d : datasets) n += d.size();
    return n;
  }
};

LoadedSequences load_labeled(const RunConfig& cfg) {
  const auto sequences = discover_sequences(cfg.feature_dir, cfg.annotation_dir);
  if (sequences.empty()) throw std::runtime_error("no sequences found in " + cfg.feature_dir.string());
  LoadedSequences loaded;
  const AlignOptions options{cfg.min_confidence};
  for (const auto& s : sequences) {
    const auto frames = parse_openface_csv(s.features);
    const auto labels = parse_annotations(s.annotations);
    auto aligned = align(frames, labels, s.id, options);
    loaded.total += std::max(frames.size(), labels.size());
    loaded.failed += aligned.dropped_failed;
    loaded.unlabeled += aligned.dropped_unlabeled;
    loaded.low_confidence += aligned.dropped_low_confidence;
    loaded.unpaired += aligned.length_discrepancy;
    loaded.datasets.push_back(std::move(aligned.dataset));
  }
  return loaded;
}

std::string describe_params(const ForestParams& p) {
  std::string s = "trees=" + std::to_string(p.n_trees) + " bootstrap=" + (p.bootstrap ? "on" : "off") +
                  " max_depth=" + (p.tree.max_depth ? std::to_string(*p.tree.max_depth) : "unlimited") +
                  " min_samples_split=" + std::to_string(p.tree.min_samples_split) +
                  " min_samples_leaf=" + std::to_string(p.tree.min_samples_leaf) +
                  " max_features=" + p.tree.max_features.to_string();
  return s;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

void check_paths(const RunConfig& cfg) {
  auto require = [](const fs::path& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string("missing required option ") + what);
  };
  require(cfg.feature_dir, "--features");
  require(cfg.model_path, "--model");
  if (cfg.mode != Mode::Predict) require(cfg.annotation_dir, "--annotations");
  if (cfg.mode == Mode::Predict) require(cfg.output_path, "--out");
}

std::vector<SequenceFiles> discover_sequences(const fs::path& feature_dir, const fs::path& annotation_dir) {
  if (!fs::is_directory(feature_dir)) throw std::runtime_error("feature directory not found: " + feature_dir.string());
  std::vector<SequenceFiles> out;
  for (const auto& entry : fs::directory_iterator(feature_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    SequenceFiles s;
    s.id = entry.path().stem().string();
    s.features = entry.path();
    if (!annotation_dir.empty()) {
      s.annotations = annotation_dir / (s.id + ".txt");
      if (!fs::is_regular_file(s.annotations)) {
        throw std::runtime_error("no annotation file for sequence '" + s.id + "' (expected " +
                                 s.annotations.string() + ")");
      }
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_paths(cfg);
    const auto loaded = load_labeled(cfg);
    const auto set = make_training_set(loaded.datasets);
    if (set.size() == 0) throw std::runtime_error("no usable frames after filtering");

    const auto model = fit_multioutput(set, cfg.params, cfg.threads);
    save_model(model, cfg.model_path);

    out << "sequences=" << loaded.datasets.size() << "\n"
        << "frames_total=" << loaded.total << "\n"
        << "frames_kept=" << loaded.kept() << "\n"
        << "frames_dropped=" << loaded.total - loaded.kept() << " (detector_failed=" << loaded.failed
        << " unlabeled=" << loaded.unlabeled << " low_confidence=" << loaded.low_confidence
        << " unpaired=" << loaded.unpaired << ")\n"
        << "params: " << describe_params(cfg.params) << "\n"
        << "seed=" << cfg.params.master_seed << "\n"
        << "model=" << cfg.model_path.string() << "\n";
    return 0;
  });
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_paths(cfg);
    const auto model = load_model(cfg.model_path);
    check_feature_order(model);
    const auto sequences = discover_sequences(cfg.feature_dir);
    if (sequences.empty()) throw std::runtime_error("no sequences found in " + cfg.feature_dir.string());
    fs::create_directories(cfg.output_path);

    const AlignOptions options{cfg.min_confidence};
    std::size_t rows = 0, dropped = 0;
    for (const auto& s : sequences) {
      const auto filtered = filter_frames(parse_openface_csv(s.features), options);
      const auto csv_path = cfg.output_path / (s.id + ".csv");
      std::ofstream csv(csv_path);
      csv << "frame,valence,arousal\n";
      FeatureMatrix x(kFeatureCount);
      for (const auto& f : filtered.kept) x.push_row(f.features.values());
      const auto predictions = predict_multioutput(model, x.view());
      for (std::size_t i = 0; i < predictions.size(); ++i) {
        csv << filtered.kept[i].frame_index << ',' << format_exact(predictions[i].valence) << ','
            << format_exact(predictions[i].arousal) << '\n';
      }
      std::ofstream log(cfg.output_path / (s.id + ".dropped.log"));
      for (auto idx : filtered.dropped) log << idx << '\n';
      csv.close();
      log.close();
      if (!csv || !log) throw std::runtime_error("failed writing predictions for " + s.id);
      rows += filtered.kept.size();
      dropped += filtered.dropped.size();
    }
    out << "sequences=" << sequences.size() << "\n"
        << "frames_predicted=" << rows << "\n"
        << "frames_dropped=" << dropped << "\n"
        << "seed=" << model.master_seed << "\n"
        << "out=" << cfg.output_path.string() << "\n";
    return 0;
  });
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_paths(cfg);
    const auto model = load_model(cfg.model_path);
    check_feature_order(model);
    const auto loaded = load_labeled(cfg);
    const auto report = evaluate(model, loaded.datasets);
    const auto kv = format_report_kv(report) + "seed=" + std::to_string(model.master_seed) + "\n";

    out << format_report_table(report) << kv;
    if (!cfg.output_path.empty()) {
      std::ofstream file(cfg.output_path);
      file << kv;
      file.close();
      if (!file) throw std::runtime_error("failed writing report to " + cfg.output_path.string());
    }
    return 0;
  });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.mode) {
    case Mode::Train: return cmd_train(cfg, out, err);
    case Mode::Predict: return cmd_predict(cfg, out, err);
    case Mode::Evaluate: return cmd_evaluate(cfg, out, err);
  }
  return 2;
}

}  // namespace affect::cli
