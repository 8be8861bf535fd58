#pragma once

#include <cstdint>
#include <random>

namespace edgepp {

/// Seeded generator used by every sampling routine. Same seed, same stream.
///
/// Uniform draws are built from raw 64-bit output rather than the standard
/// distributions, whose algorithms are implementation-defined, so that output
/// files are bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p; p <= 0 never, p >= 1 always.
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// Deterministic per-stream seed: mixes (base, stream) with splitmix64 so that
/// runs indexed by sample number get independent-looking streams regardless of
/// the order or thread they execute on.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace edgepp
