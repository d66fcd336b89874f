//
// Copyright 2026 The ldiv Authors
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
//

// Hilbert space-filling curve keys for d-dimensional integer grids.

#ifndef LDIV_HILBERT_HPP_
#define LDIV_HILBERT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ldiv/error.hpp"

namespace ldiversity {

// Position along the Hilbert curve of order `bits` through the point
// `coords`, as big-endian 64-bit words (compare lexicographically).
// Coordinates must be below 2^bits.
inline std::vector<std::uint64_t> HilbertKey(std::span<const std::uint32_t> coords,
                                             unsigned bits) {
  const std::size_t n = coords.size();
  if (bits == 0 || bits > 32) throw InvalidArgument("Hilbert order must be in [1, 32]");
  std::vector<std::uint32_t> x(coords.begin(), coords.end());
  for (auto c : x) {
    if (bits < 32 && c >> bits) throw InvalidArgument("coordinate exceeds the grid");
  }
  if (n == 0) return {};

  // Skilling's axes-to-transpose transform.
  const std::uint32_t top = 1u << (bits - 1);
  for (std::uint32_t q = top; q > 1; q >>= 1) {
    const std::uint32_t p = q - 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        const std::uint32_t t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i) x[i] ^= x[i - 1];
  std::uint32_t t = 0;
  for (std::uint32_t q = top; q > 1; q >>= 1) {
    if (x[n - 1] & q) t ^= q - 1;
  }
  for (auto& c : x) c ^= t;

  // Interleave: most significant bit level first, axis 0 first.
  const std::size_t total = n * bits;
  std::vector<std::uint64_t> key((total + 63) / 64, 0);
  std::size_t pos = 0;
  for (int b = static_cast<int>(bits) - 1; b >= 0; --b) {
    for (std::size_t i = 0; i < n; ++i, ++pos) {
      if ((x[i] >> b) & 1u) key[pos / 64] |= std::uint64_t{1} << (63 - pos % 64);
    }
  }
  return key;
}

// Smallest order whose grid side 2^bits covers `extent` values (at least 1).
inline unsigned HilbertOrder(std::size_t extent) {
  unsigned bits = 1;
  while (bits < 32 && (std::size_t{1} << bits) < extent) ++bits;
  return bits;
}

}  // namespace ldiversity

#endif  // LDIV_HILBERT_HPP_
