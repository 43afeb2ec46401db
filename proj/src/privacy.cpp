#include "mesokey/privacy.hpp"

#include <bit>
#include <stdexcept>

#include "mesokey/rng.hpp"

namespace mesokey::protocol {

namespace {

// Seed stream packed into words, bit t = (word[t/64] >> (t%64)) & 1.
std::vector<std::uint64_t> seed_stream(std::size_t bit_count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::uint64_t> words((bit_count + 63) / 64);
    for (auto& w : words) w = rng.next();
    return words;
}

std::uint64_t stream_window(const std::vector<std::uint64_t>& words, std::size_t bit) {
    const std::size_t idx = bit / 64;
    const unsigned off = bit % 64;
    std::uint64_t w = idx < words.size() ? words[idx] >> off : 0;
    if (off != 0 && idx + 1 < words.size()) w |= words[idx + 1] << (64 - off);
    return w;
}

}  // namespace

BitSequence toeplitz_hash(const BitSequence& input, std::size_t out_bits,
                          std::uint64_t seed) {
    const std::size_t len = input.size();
    if (out_bits == 0) return {};
    if (len == 0) throw std::domain_error("toeplitz_hash: empty input");

    // out[i] = parity over t of s[i + t] * input[L-1-t].
    const std::size_t word_count = (len + 63) / 64;
    std::vector<std::uint64_t> reversed(word_count, 0);
    for (std::size_t t = 0; t < len; ++t)
        if (input[len - 1 - t]) reversed[t / 64] |= 1ULL << (t % 64);

    const auto stream = seed_stream(out_bits + len - 1, seed);
    BitSequence out(out_bits);
    for (std::size_t i = 0; i < out_bits; ++i) {
        unsigned parity = 0;
        for (std::size_t w = 0; w < word_count; ++w) {
            const std::uint64_t window = stream_window(stream, i + 64 * w);
            parity ^= std::popcount(window & reversed[w]) & 1u;
        }
        out[i] = static_cast<std::uint8_t>(parity);
    }
    return out;
}

ReconcileResult reconcile_and_verify(const BitSequence& key_a, const BitSequence& key_b,
                                     int check_bits, std::uint64_t seed) {
    if (key_a.size() != key_b.size())
        throw std::domain_error("reconcile_and_verify: key length mismatch");
    if (check_bits < 0)
        throw std::domain_error("reconcile_and_verify: check_bits must be >= 0");

    ReconcileResult r;
    if (check_bits == 0) {
        r.verified = true;
        r.degenerate = true;
        return r;
    }
    r.digest_a = toeplitz_hash(key_a, static_cast<std::size_t>(check_bits), seed);
    r.digest_b = toeplitz_hash(key_b, static_cast<std::size_t>(check_bits), seed);
    r.verified = (r.digest_a == r.digest_b);
    return r;
}

BitSequence privacy_amplify(const BitSequence& key, std::size_t output_length,
                            std::uint64_t hash_seed) {
    if (output_length > key.size())
        throw std::domain_error("privacy_amplify: output longer than input");
    if (output_length == 0) return {};
    return toeplitz_hash(key, output_length, hash_seed);
}

}  // namespace mesokey::protocol
