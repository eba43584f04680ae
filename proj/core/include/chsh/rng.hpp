#pragma once

#include <cstdint>

#include "chsh/angles.hpp"

namespace chsh {

// SplitMix64 finalizer. Used as the mixing function of the counter-based
// generator below.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based random stream for one simulation round.
//
// Draw j of round k under seed s is the pure function
//   splitmix64(splitmix64(s + GAMMA*(k+1)) + GAMMA*(j+1)),
// so any sharding of rounds across workers reproduces the exact same values.
class RoundRng {
  public:
    RoundRng(std::uint64_t seed, std::uint64_t round)
        : key_(splitmix64(seed + kGamma * (round + 1))), round_(round) {}

    std::uint64_t next_u64() { return splitmix64(key_ + kGamma * (++slot_)); }

    // Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform angle in [-pi, pi).
    double next_angle() { return -kPi + kTwoPi * next_unit(); }

    std::uint64_t round() const { return round_; }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t round_;
    std::uint64_t slot_ = 0;
};

}  // namespace chsh
