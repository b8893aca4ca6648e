#pragma once

// Counter-based random streams.
//
// Every random number in the library is a pure function of
//   (seed, tag, stream index, counter)
// passed through a SplitMix64-style mixer. There is no hidden generator
// state: two streams built from the same coordinates emit bitwise-identical
// sequences on every platform, and any single draw can be regenerated
// without replaying the ones before it.

#include <cstdint>

namespace cocycle_lab::rng {

// Module tags keep streams of different subsystems disjoint.
enum class Tag : std::uint64_t {
  optimizer = 0x4f50540001ULL,
  brownian = 0x4252570002ULL,
  brownian_copy = 0x4252570003ULL,
  battery = 0x4254520004ULL,
  gallery = 0x47414c0005ULL,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// Key for stream `index` of module `tag` under the user seed.
std::uint64_t derive_key(std::uint64_t seed, Tag tag, std::uint64_t index) noexcept;

// Raw 64 bits at position `counter` of the stream keyed by `key`.
std::uint64_t bits(std::uint64_t key, std::uint64_t counter) noexcept;

// Uniform in the open interval (0, 1), 53 bits of resolution.
double unit_open(std::uint64_t raw) noexcept;

// Standard normal at position `counter` (Box-Muller on two sub-counters).
double normal_at(std::uint64_t key, std::uint64_t counter) noexcept;

// Sequential view over one stream.
class Stream {
 public:
  Stream(std::uint64_t seed, Tag tag, std::uint64_t index) noexcept
      : key_(derive_key(seed, tag, index)) {}
  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_bits() noexcept { return bits(key_, counter_++); }
  double uniform() noexcept { return unit_open(next_bits()); }
  double normal() noexcept { return normal_at(key_, counter_++); }
  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cocycle_lab::rng
