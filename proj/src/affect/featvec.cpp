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

#include "affect/featvec.hpp"

#include <cmath>
#include <sstream>

namespace affect {

namespace {

std::array<std::string, kFeatureCount> build_names() {
  std::array<std::string, kFeatureCount> names;
  std::size_t i = 0;
  for (const char* eye : {"gaze_0_", "gaze_1_"}) {
    for (const char* axis : {"x", "y", "z"}) {
      names[i++] = std::string(eye) + axis;
    }
  }
  names[i++] = "gaze_angle_x";
  names[i++] = "gaze_angle_y";
  for (const char* c : {"pose_Tx", "pose_Ty", "pose_Tz", "pose_Rx", "pose_Ry", "pose_Rz"}) {
    names[i++] = c;
  }
  for (auto au : kActionUnits) {
    names[i++] = std::string(au) + "_r";
  }
  for (auto au : kActionUnits) {
    names[i++] = std::string(au) + "_c";
  }
  return names;
}

std::string describe(FeatureError::Kind kind, const std::string& feature, double value) {
  std::ostringstream os;
  if (kind == FeatureError::Kind::MissingFeature) {
    os << "missing feature '" << feature << "'";
  } else {
    os << "feature '" << feature << "' out of range: " << value;
  }
  return os.str();
}

bool is_intensity(std::size_t i) { return i >= kAuIntensityBegin && i < kAuOccurrenceBegin; }
bool is_occurrence(std::size_t i) { return i >= kAuOccurrenceBegin; }

bool in_range(std::size_t i, double v) {
  if (is_intensity(i)) return v >= 0.0 && v <= kAuIntensityMax;
  if (is_occurrence(i)) return v == 0.0 || v == 1.0;
  return true;
}

}  // namespace

FeatureError::FeatureError(Kind kind, std::string feature, double value)
    : std::runtime_error(describe(kind, feature, value)),
      kind_(kind),
      feature_(std::move(feature)),
      value_(value) {}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const auto names = build_names();
  return names;
}

std::size_t feature_index(std::string_view column_name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == column_name) return i;
  }
  return kFeatureCount;
}

std::uint64_t feature_order_checksum() {
  static const std::uint64_t checksum = [] {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    };
    feed("affect-featvec-v" + std::to_string(kFeatureOrderVersion));
    for (const auto& name : feature_names()) {
      feed("\n");
      feed(name);
    }
    return h;
  }();
  return checksum;
}

FeatureVector assemble(const NamedFeatures& named, RangeCheck check) {
  const auto& names = feature_names();
  FeatureVector v;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    auto it = named.find(names[i]);
    if (it == named.end()) {
      throw FeatureError(FeatureError::Kind::MissingFeature, names[i]);
    }
    v[i] = it->second;
  }
  if (check == RangeCheck::Enforce) check_au_ranges(v);
  return v;
}

void check_au_ranges(const FeatureVector& v) {
  for (std::size_t i = kAuIntensityBegin; i < kFeatureCount; ++i) {
    if (!in_range(i, v[i])) {
      throw FeatureError(FeatureError::Kind::RangeViolation, feature_names()[i], v[i]);
    }
  }
}

Validation validate(const FeatureVector& v) {
  Validation result;
  const auto& names = feature_names();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i])) {
      result.ok = false;
      result.reasons.push_back(names[i] + " is not finite");
    } else if (!in_range(i, v[i])) {
      result.ok = false;
      result.reasons.push_back(describe(FeatureError::Kind::RangeViolation, names[i], v[i]));
    }
  }
  return result;
}

}  // namespace affect
