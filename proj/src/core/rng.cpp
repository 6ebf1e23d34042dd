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

#include "core/rng.hpp"

#include <sodium.h>

namespace glimmer {

namespace {

Seed32 hash_with_label(const Seed32& state, std::string_view label, uint64_t counter) {
  crypto_generichash_state h;
  crypto_generichash_init(&h, nullptr, 0, 32);
  crypto_generichash_update(&h, state.data(), state.size());
  crypto_generichash_update(&h, reinterpret_cast<const uint8_t*>(label.data()), label.size());
  uint8_t ctr[8];
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<uint8_t>(counter >> (56 - 8 * i));
  crypto_generichash_update(&h, ctr, sizeof ctr);
  Seed32 out{};
  crypto_generichash_final(&h, out.data(), out.size());
  return out;
}

}  // namespace

DetRng DetRng::derive(std::string_view label) const {
  return DetRng(hash_with_label(state_, label, 0));
}

void DetRng::fill(uint8_t* out, size_t n) {
  Seed32 block_seed = hash_with_label(state_, "fill", counter_++);
  randombytes_buf_deterministic(out, n, block_seed.data());
  secure_zero(block_seed);
}

Seed32 DetRng::seed32() {
  Seed32 out{};
  fill(out);
  return out;
}

uint64_t DetRng::next_u64() {
  uint8_t buf[8];
  fill(buf, sizeof buf);
  uint64_t v = 0;
  for (uint8_t b : buf) v = v << 8 | b;
  return v;
}

uint64_t DetRng::bounded(uint64_t bound) {
  // Rejection sampling keeps the distribution exactly uniform.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

Seed32 root_seed_from_u64(uint64_t seed) {
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  Seed32 out{};
  crypto_generichash_state h;
  crypto_generichash_init(&h, nullptr, 0, 32);
  static constexpr char kLabel[] = "glimmer/root";
  crypto_generichash_update(&h, reinterpret_cast<const uint8_t*>(kLabel), sizeof(kLabel) - 1);
  crypto_generichash_update(&h, buf, sizeof buf);
  crypto_generichash_final(&h, out.data(), out.size());
  return out;
}

}  // namespace glimmer
