#include "cocycle_lab/random.hpp"

#include <cmath>
#include <numbers>

namespace cocycle_lab::rng {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, Tag tag, std::uint64_t index) noexcept {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ static_cast<std::uint64_t>(tag));
  return mix64(k ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t bits(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key ^ mix64(counter * 0xd1342543de82ef95ULL + 1));
}

double unit_open(std::uint64_t raw) noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(raw >> 11) + 0.5) * 0x1.0p-53;
}

double normal_at(std::uint64_t key, std::uint64_t counter) noexcept {
  const double u1 = unit_open(bits(key, 2 * counter));
  const double u2 = unit_open(bits(key, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cocycle_lab::rng
