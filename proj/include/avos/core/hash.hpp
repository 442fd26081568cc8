#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace avos {

/// FNV-1a over bytes, 64-bit.
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes) {
    for (std::byte b : bytes) {
      state_ ^= static_cast<uint64_t>(b);
      state_ *= 0x100000001b3ULL;
    }
  }
  void update(std::string_view s) { update(std::as_bytes(std::span(s.data(), s.size()))); }
  /// Word-at-a-time variant for large dense arrays; not byte-compatible with
  /// update() on the same memory.
  void update_words(std::span<const uint64_t> words) {
    for (uint64_t w : words) {
      state_ ^= w;
      state_ *= 0x100000001b3ULL;
      state_ ^= state_ >> 29;
    }
  }
  template <typename T>
  void update_values(std::span<const T> values) {
    update(std::as_bytes(values));
  }
  template <typename T>
  void update_value(const T& v) {
    update(std::as_bytes(std::span<const T, 1>(&v, 1)));
  }
  uint64_t digest() const { return state_; }

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace avos
