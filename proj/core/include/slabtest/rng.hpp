#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace slabtest::rng {

using Counter = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

/// Philox4x64-10 block function: four 64-bit outputs per counter value.
Counter philox(Counter ctr, Key key) noexcept;

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Uniform on the open interval (0, 1) from the top 52 bits. With 53 bits
/// the largest value would round up to 1.
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Random access stream of doubles addressed by (key, stream, rep, index).
/// Element i of a stream never depends on any other element, so draws can be
/// made in any order or split across threads.
class Stream {
 public:
  Stream(Key key, std::uint64_t stream, std::uint64_t rep) noexcept
      : key_(key), stream_(stream), rep_(rep) {}

  /// Uniform (0, 1) variate number i.
  double uniform(std::uint64_t i) const noexcept;
  /// Fills out[k] with uniforms first + k.
  void uniforms(std::uint64_t first, double* out, std::size_t count) const noexcept;
  /// Standard normal variates first + k by inverse CDF.
  void normals(std::uint64_t first, double* out, std::size_t count) const;

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t rep_;
};

}  // namespace slabtest::rng
