#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

namespace dunkl {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seed for every sampling battery; DUNKL_VERIFY_SEED overrides the default.
inline std::uint64_t battery_seed() {
  if (const char* env = std::getenv("DUNKL_VERIFY_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t salt = 0) { return Rng(battery_seed() + salt); }

// Explicit transforms keep streams identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace dunkl
