#include "mesokey/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mesokey {

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("next_below: bound must be > 0");
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = next();
        if (x >= limit) return x % bound;
    }
}

double SplitMix64::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return mix.next();
}

}  // namespace mesokey
