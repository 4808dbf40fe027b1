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
#include <random>

namespace affect {

// All randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Standard distributions are avoided because their output
// is implementation-defined; bounded draws use uniform_index() below.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for sub-stream `stream` of `seed`:
///   mix64(seed + 0x9E3779B97F4A7C15 * (stream + 1))
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Unbiased draw from [0, bound) by Lemire's multiply-and-reject. bound >= 1.
std::uint64_t uniform_index(Engine& engine, std::uint64_t bound);

}  // namespace affect
