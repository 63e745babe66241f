#ifndef MAOEDA_RNG_HPP
#define MAOEDA_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace maoeda {

using Rng = std::mt19937_64;

/// Derives an independent, reproducible generator from a master seed and a
/// stream name ("init", "pcsea", "repair", "offspring", "mc-hv", ...).
///
/// Each phase of a run draws from its own stream, so disabling one phase
/// leaves the draws of every other phase untouched.
inline Rng make_stream(std::uint64_t master_seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

}  // namespace maoeda

#endif
