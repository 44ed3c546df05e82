#pragma once

#include <cstdint>
#include <random>

namespace lgvf {

// Deterministic seed derivation. Every randomized component owns a named
// substream so that adding a consumer never shifts another one's draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ stream);
}

enum class Stream : std::uint64_t {
    param_init = 0x01,
    training = 0x02,
    sampling = 0x03,
    base_samples = 0x04,
    mixture_samples = 0x05,
    eval_reference = 0x06,
    probes = 0x07,
};

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream) {
    return std::mt19937_64(mix_seed(seed, static_cast<std::uint64_t>(stream)));
}

// Per-item substream (one engine per sample, per probe, ...).
inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream, std::uint64_t item) {
    return std::mt19937_64(splitmix64(mix_seed(seed, static_cast<std::uint64_t>(stream)) ^ item));
}

}  // namespace lgvf
