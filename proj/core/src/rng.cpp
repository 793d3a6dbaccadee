#include "slabtest/rng.hpp"

#include "slabtest/stdnorm.hpp"

namespace slabtest::rng {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) noexcept {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Counter philox(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Stream::uniform(std::uint64_t i) const noexcept {
  const Counter block = philox({i / 4, stream_, rep_, 0}, key_);
  return to_open_unit(block[i % 4]);
}

void Stream::uniforms(std::uint64_t first, double* out, std::size_t count) const noexcept {
  std::size_t k = 0;
  while (k < count) {
    const std::uint64_t i = first + k;
    const Counter block = philox({i / 4, stream_, rep_, 0}, key_);
    for (std::uint64_t lane = i % 4; lane < 4 && k < count; ++lane, ++k) {
      out[k] = to_open_unit(block[lane]);
    }
  }
}

void Stream::normals(std::uint64_t first, double* out, std::size_t count) const {
  uniforms(first, out, count);
  for (std::size_t k = 0; k < count; ++k) out[k] = stdnorm::upper_tail_inv(out[k]);
}

}  // namespace slabtest::rng
