#include "minimosa/rng.hpp"

namespace minimosa {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t mixSeed(uint64_t a, uint64_t b) {
    // splitmix64 finalization with `b` added between the (bijective) steps:
    // injective in either argument while the other is fixed, and asymmetric
    uint64_t z = a + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z += b;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace minimosa
