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

#include "affect/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace affect {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::string row_detail(std::string_view column, std::string_view value) {
  std::ostringstream os;
  os << "column '" << column << "' has invalid value '" << value << "'";
  return os.str();
}

std::string describe(IngestError::Kind kind, const std::string& detail, std::size_t line) {
  std::ostringstream os;
  switch (kind) {
    case IngestError::Kind::IoFailure: os << "I/O failure: "; break;
    case IngestError::Kind::MissingColumn: os << "missing column: "; break;
    case IngestError::Kind::MalformedRow: os << "malformed row"; break;
    case IngestError::Kind::MalformedLine: os << "malformed line"; break;
  }
  if (line > 0) os << " at line " << line << ": ";
  else if (kind == IngestError::Kind::MalformedRow || kind == IngestError::Kind::MalformedLine) os << ": ";
  os << detail;
  return os.str();
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(IngestError::Kind::IoFailure, "cannot open " + path.string());
  return in;
}

}  // namespace

IngestError::IngestError(Kind kind, std::string detail, std::size_t line)
    : std::runtime_error(describe(kind, detail, line)), kind_(kind), line_(line) {}

bool label_in_range(double valence, double arousal) {
  return valence >= -1.0 && valence <= 1.0 && arousal >= -1.0 && arousal <= 1.0;
}

std::vector<FrameRecord> Dataset::frames() const {
  std::vector<FrameRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.frame);
  return out;
}

std::vector<AffectLabel> Dataset::labels() const {
  std::vector<AffectLabel> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.label);
  return out;
}

std::vector<std::string> required_openface_columns() {
  std::vector<std::string> cols = {"success", "confidence"};
  for (const auto& name : feature_names()) cols.push_back(name);
  return cols;
}

std::vector<FrameRecord> parse_openface_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) break;
  }
  if (line_no == 0 || blank(line)) {
    throw IngestError(IngestError::Kind::MissingColumn, "success (no header row)");
  }

  const auto header = split_fields(line);
  auto column_of = [&header](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };

  std::array<std::size_t, kFeatureCount> feature_cols{};
  const auto& names = feature_names();
  auto success_col = column_of("success");
  auto confidence_col = column_of("confidence");
  for (const auto& name : required_openface_columns()) {
    if (!column_of(name)) throw IngestError(IngestError::Kind::MissingColumn, name);
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) feature_cols[i] = *column_of(names[i]);
  const auto frame_col = column_of("frame");

  std::vector<FrameRecord> records;
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t row = 0;
  // `header` views into `line`, which the loop below reuses.
  std::vector<std::string> header_names(header.begin(), header.end());

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header_names.size()) {
      std::ostringstream os;
      os << "expected " << header_names.size() << " fields, found " << fields.size();
      throw IngestError(IngestError::Kind::MalformedRow, os.str(), line_no);
    }
    auto numeric = [&](std::size_t col) {
      auto v = parse_real(fields[col]);
      if (!v || !std::isfinite(*v)) {
        throw IngestError(IngestError::Kind::MalformedRow, row_detail(header_names[col], fields[col]), line_no);
      }
      return *v;
    };

    FrameRecord rec;
    FeatureVector::Storage values{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) values[i] = numeric(feature_cols[i]);
    rec.features = FeatureVector(values);
    try {
      check_au_ranges(rec.features);
    } catch (const FeatureError& e) {
      throw IngestError(IngestError::Kind::MalformedRow, e.what(), line_no);
    }

    const double success = numeric(*success_col);
    if (success != 0.0 && success != 1.0) {
      throw IngestError(IngestError::Kind::MalformedRow, row_detail("success", fields[*success_col]), line_no);
    }
    rec.success = success == 1.0;

    rec.confidence = numeric(*confidence_col);
    if (rec.confidence < 0.0 || rec.confidence > 1.0) {
      throw IngestError(IngestError::Kind::MalformedRow, row_detail("confidence", fields[*confidence_col]),
                        line_no);
    }

    if (frame_col) {
      const double f = numeric(*frame_col);
      if (f < 0.0 || f != std::floor(f) || f > 9.0e15) {
        throw IngestError(IngestError::Kind::MalformedRow, row_detail("frame", fields[*frame_col]), line_no);
      }
      rec.frame_index = static_cast<std::uint64_t>(f);
    } else {
      rec.frame_index = row;
    }
    if (!seen.insert(rec.frame_index).second) {
      throw IngestError(IngestError::Kind::MalformedRow,
                        "duplicate frame index " + std::to_string(rec.frame_index), line_no);
    }
    records.push_back(rec);
    ++row;
  }
  return records;
}

std::vector<FrameRecord> parse_openface_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_openface_csv(in);
}

std::vector<AffectLabel> parse_annotations(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<AffectLabel> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (blank(line)) continue;
    const auto fields = split_fields(line);
    std::optional<double> v, a;
    if (fields.size() == 2) {
      v = parse_real(fields[0]);
      a = parse_real(fields[1]);
    }
    if (!v || !a) {
      throw IngestError(IngestError::Kind::MalformedLine, "expected 'valence,arousal', got '" + line + "'",
                        line_no);
    }
    labels.push_back({*v, *a, label_in_range(*v, *a)});
  }
  return labels;
}

std::vector<AffectLabel> parse_annotations(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_annotations(in);
}

namespace {

enum class Verdict { Keep, Failed, LowConfidence };

Verdict judge(const FrameRecord& f, const AlignOptions& options) {
  if (!f.success) return Verdict::Failed;
  if (options.min_confidence && f.confidence < *options.min_confidence) return Verdict::LowConfidence;
  return Verdict::Keep;
}

}  // namespace

AlignResult align(const std::vector<FrameRecord>& frames, const std::vector<AffectLabel>& labels,
                  std::string sequence_id, const AlignOptions& options) {
  AlignResult result;
  result.dataset.sequence_id = std::move(sequence_id);
  const std::size_t n = std::min(frames.size(), labels.size());
  result.length_discrepancy = std::max(frames.size(), labels.size()) - n;

  for (std::size_t i = 0; i < n; ++i) {
    switch (judge(frames[i], options)) {
      case Verdict::Failed: ++result.dropped_failed; continue;
      case Verdict::LowConfidence: ++result.dropped_low_confidence; continue;
      case Verdict::Keep: break;
    }
    const auto& label = labels[i];
    if (!label.valid || !label_in_range(label.valence, label.arousal)) {
      ++result.dropped_unlabeled;
      continue;
    }
    result.dataset.records.push_back({frames[i], label});
  }
  std::stable_sort(result.dataset.records.begin(), result.dataset.records.end(),
                   [](const LabeledFrame& a, const LabeledFrame& b) {
                     return a.frame.frame_index < b.frame.frame_index;
                   });
  return result;
}

FrameFilterResult filter_frames(const std::vector<FrameRecord>& frames, const AlignOptions& options) {
  FrameFilterResult result;
  for (const auto& f : frames) {
    if (judge(f, options) == Verdict::Keep) result.kept.push_back(f);
    else result.dropped.push_back(f.frame_index);
  }
  return result;
}

}  // namespace affect
