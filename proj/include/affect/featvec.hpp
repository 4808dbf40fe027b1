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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace affect {

// Canonical layout of the 48-entry hand-crafted feature vector.
//
//   0-2    left eye gaze direction  (gaze_0_x, gaze_0_y, gaze_0_z)
//   3-5    right eye gaze direction (gaze_1_x, gaze_1_y, gaze_1_z)
//   6-7    gaze angles, radians     (gaze_angle_x, gaze_angle_y)
//   8-10   head translation, mm     (pose_Tx, pose_Ty, pose_Tz)
//   11-13  head rotation, radians   (pose_Rx, pose_Ry, pose_Rz)
//   14-30  AU intensities in [0,5]  (AU01_r ... AU45_r)
//   31-47  AU occurrences in {0,1}  (AU01_c ... AU45_c)
//
// The order is frozen: model files embed feature_order_checksum() and refuse
// to predict under a different layout. Bump kFeatureOrderVersion when editing.
inline constexpr std::size_t kFeatureCount = 48;
inline constexpr std::size_t kAuCount = 17;
inline constexpr std::uint32_t kFeatureOrderVersion = 1;

inline constexpr std::size_t kGazeLeftBegin = 0;
inline constexpr std::size_t kGazeRightBegin = 3;
inline constexpr std::size_t kGazeAngleBegin = 6;
inline constexpr std::size_t kPoseTranslationBegin = 8;
inline constexpr std::size_t kPoseRotationBegin = 11;
inline constexpr std::size_t kAuIntensityBegin = 14;
inline constexpr std::size_t kAuOccurrenceBegin = kAuIntensityBegin + kAuCount;

inline constexpr double kAuIntensityMax = 5.0;

/// The AUs carrying both an intensity and an occurrence channel, in output
/// order. AU28 (occurrence only) is intentionally absent.
inline constexpr std::array<std::string_view, kAuCount> kActionUnits = {
    "AU01", "AU02", "AU04", "AU05", "AU06", "AU07", "AU09", "AU10", "AU12",
    "AU14", "AU15", "AU17", "AU20", "AU23", "AU25", "AU26", "AU45"};

/// Source column name for each canonical index.
const std::array<std::string, kFeatureCount>& feature_names();

/// Canonical index of a column name, or kFeatureCount if it is not a feature.
std::size_t feature_index(std::string_view column_name);

/// 64-bit FNV-1a over the version tag and the ordered feature names.
std::uint64_t feature_order_checksum();

class FeatureError : public std::runtime_error {
public:
  enum class Kind { MissingFeature, RangeViolation };

  FeatureError(Kind kind, std::string feature, double value = 0.0);

  Kind kind() const noexcept { return kind_; }
  const std::string& feature() const noexcept { return feature_; }
  double value() const noexcept { return value_; }

private:
  Kind kind_;
  std::string feature_;
  double value_;
};

class FeatureVector {
public:
  using Storage = std::array<double, kFeatureCount>;

  FeatureVector() : values_{} {}
  explicit FeatureVector(const Storage& values) : values_(values) {}

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  static constexpr std::size_t size() { return kFeatureCount; }

  std::span<const double, kFeatureCount> values() const { return values_; }
  const Storage& storage() const { return values_; }

  bool operator==(const FeatureVector&) const = default;

private:
  Storage values_;
};

using NamedFeatures = std::map<std::string, double, std::less<>>;

enum class RangeCheck { Enforce, Skip };

/// Places every named feature at its canonical index. Extra names are ignored.
/// Throws FeatureError::MissingFeature, or FeatureError::RangeViolation unless
/// range checking is skipped.
FeatureVector assemble(const NamedFeatures& named, RangeCheck check = RangeCheck::Enforce);

/// Throws FeatureError::RangeViolation if an AU entry is outside its range.
void check_au_ranges(const FeatureVector& v);

struct Validation {
  bool ok = true;
  std::vector<std::string> reasons;

  explicit operator bool() const { return ok; }
};

/// Checks finiteness and AU ranges without throwing.
Validation validate(const FeatureVector& v);

}  // namespace affect
