// Copyright 2026 The SRA Authors
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

#ifndef SRA_RNG_HPP_
#define SRA_RNG_HPP_

#include <cstdint>

namespace sra {

// All randomness in the library is derived by hashing a master seed together
// with small integer tags.  Draws therefore never share mutable state: a
// deviation by one agent cannot displace another agent's draw, identical
// seeds give byte-identical results on every platform, and independent runs
// are trivially parallel.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a) { return splitmix64(a); }

template <class... Rest>
std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix(splitmix64(a) ^ b, rest...);
}

// Uniform index in [0, n).  Desk-scale n keeps the modulo bias far below
// anything observable.
inline int pick_index(std::uint64_t h, int n) {
  return static_cast<int>(h % static_cast<std::uint64_t>(n));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace sra

#endif  // SRA_RNG_HPP_
