/*
 * Copyright 2026 The Glimmer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GLIMMER_CORE_RNG_HPP_
#define GLIMMER_CORE_RNG_HPP_

#include <cstdint>
#include <string_view>

#include "core/common.hpp"

namespace glimmer {

/// Deterministic RNG tree. Every source of randomness in a simulation run is
/// a labelled child of one root seed, so runs replay bit-for-bit regardless
/// of call-site ordering elsewhere in the tree.
class DetRng {
 public:
  explicit DetRng(const Seed32& seed) : state_(seed) {}

  /// Stable child stream: derive("client/3/box") is independent of every
  /// other label and of how much the parent has been consumed.
  DetRng derive(std::string_view label) const;

  void fill(uint8_t* out, size_t n);
  void fill(Bytes& out, size_t n) {
    out.resize(n);
    if (n) fill(out.data(), n);
  }
  template <size_t N>
  void fill(std::array<uint8_t, N>& out) {
    fill(out.data(), N);
  }
  Seed32 seed32();
  uint64_t next_u64();
  /// Uniform in [0, bound) via rejection sampling; bound must be nonzero.
  uint64_t bounded(uint64_t bound);

 private:
  Seed32 state_{};
  uint64_t counter_ = 0;
};

/// Root seed for a simulation run, derived from the scenario's 64-bit seed.
Seed32 root_seed_from_u64(uint64_t seed);

}  // namespace glimmer

#endif  // GLIMMER_CORE_RNG_HPP_
