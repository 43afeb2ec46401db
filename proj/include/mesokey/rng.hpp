#pragma once

#include <cstdint>

namespace mesokey {

/// Deterministic counter-based generator (SplitMix64) standing in for the
/// physical random generator. Statistical caveat: this is a 64-bit-state
/// pseudo-random stream, good enough for simulation but not a hardware
/// entropy source; swap the seed source for OS entropy where that matters.
/// Every simulation output is a pure function of the seeds fed in here.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double next_double_open() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    int next_bit() { return static_cast<int>(next() >> 63); }

    /// Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal deviate via Box-Muller; the generator is pinned to
    /// this explicit recipe so streams are reproducible across platforms.
    double next_gaussian();

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derived-seed scheme for partitionable work: stream `index` of a master
/// seed. Per-trial derivation makes pooled Monte Carlo estimates
/// independent of how trials are split across workers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace mesokey
