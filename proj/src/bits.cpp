#include "mesokey/bits.hpp"

#include <cctype>
#include <stdexcept>

namespace mesokey {

BitSequence random_bits(SplitMix64& rng, std::size_t count) {
    BitSequence bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_bit());
    return bits;
}

std::vector<std::uint8_t> pack_bits(const BitSequence& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return bytes;
}

BitSequence unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
    if (bit_count > bytes.size() * 8)
        throw std::domain_error("unpack_bits: not enough bytes for bit count");
    BitSequence bits(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i)
        bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return bits;
}

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string bits_to_hex(const BitSequence& bits) {
    if (bits.size() % 4 != 0)
        throw std::domain_error("bits_to_hex: length must be a multiple of 4");
    std::string out;
    out.reserve(bits.size() / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        const int nibble =
            (bits[i] << 3) | (bits[i + 1] << 2) | (bits[i + 2] << 1) | bits[i + 3];
        out.push_back(kHexDigits[nibble]);
    }
    return out;
}

BitSequence bits_from_hex(std::string_view hex) {
    BitSequence bits;
    bits.reserve(hex.size() * 4);
    for (char c : hex) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const int v = hex_value(c);
        if (v < 0)
            throw std::domain_error(std::string("bits_from_hex: invalid digit '") + c +
                                    "'");
        bits.push_back((v >> 3) & 1);
        bits.push_back((v >> 2) & 1);
        bits.push_back((v >> 1) & 1);
        bits.push_back(v & 1);
    }
    return bits;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        const std::uint32_t v = bytes[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.append("==");
    } else if (rem == 2) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t acc = 0;
    int have = 0;
    for (char c : text) {
        if (c == '=' || std::isspace(static_cast<unsigned char>(c))) continue;
        const int v = b64_value(c);
        if (v < 0)
            throw std::domain_error(std::string("base64_decode: invalid char '") + c +
                                    "'");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        if (++have == 4) {
            out.push_back((acc >> 16) & 0xff);
            out.push_back((acc >> 8) & 0xff);
            out.push_back(acc & 0xff);
            acc = 0;
            have = 0;
        }
    }
    if (have == 2) {
        out.push_back((acc >> 4) & 0xff);
    } else if (have == 3) {
        out.push_back((acc >> 10) & 0xff);
        out.push_back((acc >> 2) & 0xff);
    } else if (have == 1) {
        throw std::domain_error("base64_decode: truncated input");
    }
    return out;
}

std::size_t hamming_distance(const BitSequence& a, const BitSequence& b) {
    if (a.size() != b.size())
        throw std::domain_error("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

}  // namespace mesokey
