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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "affect/featvec.hpp"

namespace affect {

struct FrameRecord {
  std::uint64_t frame_index = 0;
  FeatureVector features;
  bool success = false;
  double confidence = 0.0;

  bool operator==(const FrameRecord&) const = default;
};

struct AffectLabel {
  double valence = 0.0;
  double arousal = 0.0;
  bool valid = false;

  bool operator==(const AffectLabel&) const = default;
};

/// Both targets in [-1, 1]; anything else (including the usual -5 sentinel
/// and NaN) marks the frame as unlabelled.
bool label_in_range(double valence, double arousal);

struct LabeledFrame {
  FrameRecord frame;
  AffectLabel label;

  bool operator==(const LabeledFrame&) const = default;
};

struct Dataset {
  std::string sequence_id;
  std::vector<LabeledFrame> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  /// Component lists, suitable for feeding back into align().
  std::vector<FrameRecord> frames() const;
  std::vector<AffectLabel> labels() const;

  bool operator==(const Dataset&) const = default;
};

class IngestError : public std::runtime_error {
public:
  enum class Kind { IoFailure, MissingColumn, MalformedRow, MalformedLine };

  IngestError(Kind kind, std::string detail, std::size_t line = 0);

  Kind kind() const noexcept { return kind_; }
  /// 1-based line number of the offending line, 0 if not line-specific.
  std::size_t line() const noexcept { return line_; }

private:
  Kind kind_;
  std::size_t line_;
};

/// Columns every OpenFace CSV must carry: success, confidence and the 48
/// feature columns. An optional `frame` column supplies frame_index;
/// otherwise the 0-based data-row position is used.
std::vector<std::string> required_openface_columns();

std::vector<FrameRecord> parse_openface_csv(std::istream& in);
std::vector<FrameRecord> parse_openface_csv(const std::filesystem::path& path);

std::vector<AffectLabel> parse_annotations(std::istream& in);
std::vector<AffectLabel> parse_annotations(const std::filesystem::path& path);

struct AlignOptions {
  std::optional<double> min_confidence;
};

struct AlignResult {
  Dataset dataset;
  std::size_t length_discrepancy = 0;  // |frames| - |labels|, absolute
  std::size_t dropped_failed = 0;      // detector success == false
  std::size_t dropped_unlabeled = 0;   // label outside [-1, 1]
  std::size_t dropped_low_confidence = 0;

  std::size_t dropped() const { return dropped_failed + dropped_unlabeled + dropped_low_confidence; }
};

/// Pairs frame i with label i, keeping pairs with a successful detection and
/// a valid label. Extra entries on the longer side are counted, not paired.
AlignResult align(const std::vector<FrameRecord>& frames, const std::vector<AffectLabel>& labels,
                  std::string sequence_id, const AlignOptions& options = {});

struct FrameFilterResult {
  std::vector<FrameRecord> kept;
  std::vector<std::uint64_t> dropped;  // frame indices
};

/// Unlabelled counterpart of align() used for inference.
FrameFilterResult filter_frames(const std::vector<FrameRecord>& frames, const AlignOptions& options = {});

}  // namespace affect
