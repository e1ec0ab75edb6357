// Copyright 2026 The klss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KLSS_RNG_H_
#define KLSS_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace klss {

// Independent generator for a named purpose ("solver", "transposition",
// "independent-set", ...) derived from one run seed.
inline std::mt19937_64 Substream(std::uint64_t seed, std::string_view name,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Uniform double in [0, 1) that does not depend on the standard library's
// distribution implementation.
inline double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace klss

#endif  // KLSS_RNG_H_
