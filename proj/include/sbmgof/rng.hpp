#pragma once

#include <cstdint>
#include <random>

namespace sbmgof {

using Rng = std::mt19937_64;

// Deterministic seed fan-out: master seed -> per-replicate -> per-chain.
// splitmix64 is the usual way to decorrelate sequential seeds before feeding
// them to a Mersenne twister; child_seed(s, i) != child_seed(s, j) for i != j.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace sbmgof
