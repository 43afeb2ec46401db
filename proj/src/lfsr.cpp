#include "mesokey/lfsr.hpp"

#include <bit>
#include <stdexcept>

namespace mesokey::protocol {

namespace {

// One primitive polynomial per width; mask bit (w-1-e) carries term x^e.
// width 3:  x^3 + x + 1          width 10: x^10 + x^3 + 1
// width 4:  x^4 + x + 1          width 11: x^11 + x^2 + 1
// width 5:  x^5 + x^2 + 1        width 12: x^12 + x^6 + x^4 + x + 1
// width 6:  x^6 + x + 1          width 13: x^13 + x^4 + x^3 + x + 1
// width 7:  x^7 + x + 1          width 14: x^14 + x^10 + x^6 + x + 1
// width 8:  x^8+x^4+x^3+x^2+1    width 15: x^15 + x + 1
// width 9:  x^9 + x^4 + 1        width 16: x^16 + x^12 + x^3 + x + 1
constexpr std::uint32_t kPrimitiveTaps[] = {
    0x0006, 0x000c, 0x0014, 0x0030, 0x0060, 0x00b8, 0x0110,
    0x0240, 0x0500, 0x0ca0, 0x1b00, 0x3088, 0x6000, 0xd008,
};

std::uint32_t step(std::uint32_t state, std::uint32_t taps, int width) {
    const std::uint32_t fb = std::popcount(state & taps) & 1u;
    return ((state << 1) | fb) & ((1u << width) - 1u);
}

std::uint32_t seed_state(const LfsrSpec& spec) {
    if (static_cast<int>(spec.seed.size()) != spec.width)
        throw std::domain_error("lfsr: seed length must equal the register width");
    std::uint32_t s = 0;
    for (auto b : spec.seed) s = (s << 1) | (b & 1u);
    return s;
}

}  // namespace

std::uint32_t default_taps(int width) {
    if (width < 3 || width > 16)
        throw std::domain_error("default_taps: width must lie in [3, 16]");
    return kPrimitiveTaps[width - 3];
}

bool taps_maximal(int width, std::uint32_t taps) {
    if (width < 1 || width > 16) return false;
    const std::uint32_t full = (1u << width) - 1u;
    std::uint32_t s = 1;
    std::uint32_t steps = 0;
    do {
        s = step(s, taps, width);
        ++steps;
        if (steps > full) return false;
    } while (s != 1);
    return steps == full;
}

std::vector<int> lfsr_expand(const LfsrSpec& spec, std::size_t count) {
    if (spec.width < 3 || spec.width > 16)
        throw std::domain_error("lfsr_expand: width must lie in [3, 16]");
    if (!taps_maximal(spec.width, spec.taps))
        throw std::domain_error("lfsr_expand: taps are not maximal-length");
    std::uint32_t state = seed_state(spec);
    if (state == 0)
        throw std::domain_error("lfsr_expand: all-zero seed is the absorbing state");

    std::vector<int> bases;
    bases.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        bases.push_back(static_cast<int>(state));
        state = step(state, spec.taps, spec.width);
    }
    return bases;
}

}  // namespace mesokey::protocol
