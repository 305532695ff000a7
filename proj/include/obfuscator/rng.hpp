#pragma once

#include <cstdint>
#include <random>

namespace obf {

/// Deterministic random source for the transformer and renderer. mt19937_64
/// has a standard-specified sequence, and the bounded draw below avoids
/// std::uniform_int_distribution, whose output is implementation-defined;
/// together that makes obfuscated output reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform-ish draw in [0, bound). Modulo bias is irrelevant here; the
    /// bounds in use are tiny compared to 2^64.
    std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

    bool coin() { return (gen_() & 1) != 0; }

private:
    std::mt19937_64 gen_;
};

}  // namespace obf
