#pragma once

// Deterministic random source. splitmix64 rather than <random> engines +
// distributions because distribution output is implementation-defined and
// suites must reproduce bit-identically across toolchains.

#include <cstdint>
#include <string>

namespace minimosa {

class RandomSource {
public:
    explicit RandomSource(uint64_t seed) : state_(seed) {}

    uint64_t nextU64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n); n must be > 0 (modulo bias is irrelevant at our ranges)
    uint64_t below(uint64_t n) { return nextU64() % n; }

    // uniform in [lo, hi] inclusive
    int64_t intIn(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    // independent derived stream
    RandomSource fork() { return RandomSource(nextU64()); }

private:
    uint64_t state_;
};

// FNV-1a, for deriving per-run seeds from subject/algorithm names.
uint64_t fnv1a(const std::string& s);

// order-sensitive seed combination
uint64_t mixSeed(uint64_t a, uint64_t b);

} // namespace minimosa
