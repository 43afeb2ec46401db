#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mesokey/rng.hpp"

namespace mesokey {

/// Ordered bit sequence; each element is 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

BitSequence random_bits(SplitMix64& rng, std::size_t count);

/// Pack bits MSB-first into bytes (final byte zero-padded).
std::vector<std::uint8_t> pack_bits(const BitSequence& bits);
BitSequence unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count);

/// Hex codec for keys and seeds. Each hex digit maps to 4 bits MSB-first;
/// whitespace is ignored on decode.
std::string bits_to_hex(const BitSequence& bits);
BitSequence bits_from_hex(std::string_view hex);

/// Standard base64 (RFC 4648 alphabet, '=' padding).
std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::size_t hamming_distance(const BitSequence& a, const BitSequence& b);

}  // namespace mesokey
