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

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affect/forest.hpp"

namespace affect {

// Binary model layout; see docs/FORMAT.md for the byte-level table.
inline constexpr char kModelMagic[8] = {'A', 'F', 'R', 'F', 'M', 'D', 'L', '\0'};
inline constexpr char kModelTrailer[8] = {'A', 'F', 'R', 'F', 'E', 'N', 'D', '\0'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelIoError : public std::runtime_error {
public:
  enum class Kind { IoFailure, BadMagic, UnsupportedVersion, CorruptTree };

  ModelIoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

using Bytes = std::vector<std::uint8_t>;

Bytes encode_model(const MultiOutputModel& m);
/// Parses a complete model or throws; never returns a partial model.
MultiOutputModel decode_model(std::span<const std::uint8_t> bytes);

/// Encoding of one forest block as it appears inside a model file.
Bytes encode_forest(const Forest& f);

void save_model(const MultiOutputModel& m, const std::filesystem::path& path);
MultiOutputModel load_model(const std::filesystem::path& path);

}  // namespace affect
