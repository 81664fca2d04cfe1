#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace cpphase {

inline constexpr std::string_view kRngName = "philox4x32-10";
inline constexpr std::string_view kRngVersion = "1";

// Philox4x32 with 10 rounds (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept;

// SplitMix64 finaliser. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, used to turn module tags into stream-derivation constants.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Stream key for replica `index` of module `tag` under `master_seed`. For a
// fixed (seed, tag) the map index -> key is injective.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view tag,
                                      std::uint64_t index) noexcept {
  const std::uint64_t base = mix64(mix64(master_seed) ^ tag_hash(tag));
  return mix64(base + index * 0xD1B54A32D192ED03ULL);
}

constexpr std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) + index * 0xD1B54A32D192ED03ULL);
}

// Counter-based generator: a 64-bit stream key plus a 64-bit substream word
// select an independent sequence; the block counter advances within it.
// Satisfies UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng() = default;
  explicit StreamRng(std::uint64_t key, std::uint64_t substream = 0) noexcept
      : key_(key), substream_(substream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

  double normal() noexcept;

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t substream() const noexcept { return substream_; }
  std::uint64_t position() const noexcept { return block_ * 2 + lane_ - 2; }

  // Rewind to the start of the (key, substream) sequence.
  void reset(std::uint64_t substream) noexcept {
    substream_ = substream;
    block_ = 0;
    lane_ = 2;
    has_spare_ = false;
  }

 private:
  void refill() noexcept;

  std::uint64_t key_ = 0;
  std::uint64_t substream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned lane_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cpphase
