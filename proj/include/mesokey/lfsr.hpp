#pragma once

#include <cstdint>
#include <vector>

#include "mesokey/bits.hpp"

namespace mesokey::protocol {

/// Fibonacci LFSR specification for the per-bit ciphering variant.
/// The register is `width` = K_M bits wide; each step shifts left and
/// feeds parity(state & taps) into the new LSB. Successive states are
/// the emitted basis indices. With primitive taps the state walks all
/// 2^K_M - 1 non-zero values before repeating.
struct LfsrSpec {
    int width = 0;           ///< K_M, supported range 3..16
    std::uint32_t taps = 0;  ///< feedback mask over the state bits
    BitSequence seed;        ///< initial state, MSB first, not all-zero
};

/// Tap mask of a fixed primitive polynomial for each width in 3..16.
std::uint32_t default_taps(int width);

/// True when `taps` generate the full 2^width - 1 cycle (checked by
/// walking the orbit; equivalent to the feedback polynomial being
/// primitive).
bool taps_maximal(int width, std::uint32_t taps);

/// Expand the seed into `count` successive basis indices. Throws on an
/// all-zero seed (the absorbing state) and on non-maximal taps.
std::vector<int> lfsr_expand(const LfsrSpec& spec, std::size_t count);

}  // namespace mesokey::protocol
