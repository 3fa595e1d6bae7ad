#pragma once

#include <cstdint>

namespace geoinf::rng {

// Counter-based generator: every variate is a pure function of
// (seed, sample index, stream), so results never depend on how samples are
// split between workers.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851F42D4C957F2DULL);
  h = mix64(h ^ (index * 0xD1B54A32D192ED03ULL));
  h = mix64(h ^ (stream * 0x8CB92BA72F3D8DD7ULL + 0x2545F4914F6CDD1DULL));
  return h;
}

/// Uniform variate in the open interval (0, 1).
constexpr double uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) noexcept {
  return (static_cast<double>(bits(seed, index, stream) >> 11) + 0.5) * 0x1.0p-53;
}

/// Independent child seed, e.g. one per rotation or per inner sample set.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(mix64(seed) ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

}  // namespace geoinf::rng
