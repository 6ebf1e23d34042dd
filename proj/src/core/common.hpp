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

#ifndef GLIMMER_CORE_COMMON_HPP_
#define GLIMMER_CORE_COMMON_HPP_

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace glimmer {

using Bytes = std::vector<uint8_t>;
using ConstBytes = std::span<const uint8_t>;
using Seed32 = std::array<uint8_t, 32>;

inline ConstBytes as_bytes(const Bytes& b) { return ConstBytes(b.data(), b.size()); }
inline ConstBytes as_bytes(std::string_view s) {
  return ConstBytes(reinterpret_cast<const uint8_t*>(s.data()), s.size());
}
template <size_t N>
inline ConstBytes as_bytes(const std::array<uint8_t, N>& a) {
  return ConstBytes(a.data(), a.size());
}

std::string to_hex(ConstBytes data);
std::optional<Bytes> from_hex(std::string_view hex);

/// Overwrites a buffer with zeros in a way the optimizer cannot elide.
void secure_zero(void* p, size_t n);
inline void secure_zero(Bytes& b) {
  if (!b.empty()) secure_zero(b.data(), b.size());
  b.clear();
}
template <size_t N>
inline void secure_zero(std::array<uint8_t, N>& a) {
  secure_zero(a.data(), N);
}

// Big-endian scalar codec used by every normative wire layout.
class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u16(uint16_t v) {
    out_.push_back(static_cast<uint8_t>(v >> 8));
    out_.push_back(static_cast<uint8_t>(v));
  }
  void u32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
      out_.push_back(static_cast<uint8_t>(v >> shift));
  }
  void u64(uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
      out_.push_back(static_cast<uint8_t>(v >> shift));
  }
  void bytes(ConstBytes b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void var_bytes(ConstBytes b) {  // 4-byte big-endian length prefix
    u32(static_cast<uint32_t>(b.size()));
    bytes(b);
  }
  size_t size() const { return out_.size(); }
  Bytes take() { return std::move(out_); }
  const Bytes& view() const { return out_; }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(ConstBytes data) : data_(data) {}

  bool u8(uint8_t& v) {
    if (remaining() < 1) return fail();
    v = data_[pos_++];
    return true;
  }
  bool u16(uint16_t& v) {
    if (remaining() < 2) return fail();
    v = static_cast<uint16_t>(uint16_t(data_[pos_]) << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return true;
  }
  bool u32(uint32_t& v) {
    if (remaining() < 4) return fail();
    v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_++];
    return true;
  }
  bool u64(uint64_t& v) {
    if (remaining() < 8) return fail();
    v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_++];
    return true;
  }
  bool bytes(uint8_t* dst, size_t n) {
    if (remaining() < n) return fail();
    std::memcpy(dst, data_.data() + pos_, n);
    pos_ += n;
    return true;
  }
  template <size_t N>
  bool bytes(std::array<uint8_t, N>& dst) {
    return bytes(dst.data(), N);
  }
  bool bytes(Bytes& dst, size_t n) {
    if (remaining() < n) return fail();
    dst.assign(data_.begin() + static_cast<ptrdiff_t>(pos_),
               data_.begin() + static_cast<ptrdiff_t>(pos_ + n));
    pos_ += n;
    return true;
  }
  bool var_bytes(Bytes& dst) {
    uint32_t n = 0;
    if (!u32(n)) return false;
    return bytes(dst, n);
  }
  size_t remaining() const { return data_.size() - pos_; }
  bool exhausted() const { return pos_ == data_.size() && !failed_; }
  bool failed() const { return failed_; }
  size_t position() const { return pos_; }

 private:
  bool fail() {
    failed_ = true;
    return false;
  }
  ConstBytes data_;
  size_t pos_ = 0;
  bool failed_ = false;
};

}  // namespace glimmer

#endif  // GLIMMER_CORE_COMMON_HPP_
