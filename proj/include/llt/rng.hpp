#pragma once

#include <cstdint>

namespace llt {

// Counter-based 64-bit generator (splitmix64 finalizer over an additive
// counter). State advances by a fixed odd constant, so the n-th output is a
// pure function of (seed, n): streams can be replayed or skipped cheaply and
// replicas never share state.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Fair bit.
    int next_bit() { return static_cast<int>(next_u64() >> 63); }

  private:
    std::uint64_t state_;
};

// Mixes an integer through the splitmix64 finalizer (no counter step).
inline std::uint64_t splitmix_mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stream for replica r: seed XOR splitmix(r). Replica 0 keeps the base seed
// untouched so single-path runs and the first replica coincide.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t replica) {
    return replica == 0 ? seed : (seed ^ splitmix_mix(replica));
}

}  // namespace llt
