#pragma once

#include <cstdint>

#include "mesokey/bits.hpp"

namespace mesokey::protocol {

/// Binary Toeplitz-matrix hash: out[i] = XOR_j T[i][j] * in[j] with
/// T[i][j] = s[i - j + (L-1)], where s is the seed bit stream expanded
/// deterministically from `seed`. Linear over XOR; the family is
/// universal, so two distinct inputs collide with probability
/// 2^-out_bits over the seed choice.
BitSequence toeplitz_hash(const BitSequence& input, std::size_t out_bits,
                          std::uint64_t seed);

struct ReconcileResult {
    bool verified = false;
    bool degenerate = false;  ///< check_bits == 0: vacuous comparison
    BitSequence digest_a;
    BitSequence digest_b;
};

/// Verification-only reconciliation: both keys are hashed to a
/// check_bits digest under a shared seed; equal digests verify the keys,
/// unequal digests abort. No error correction is attempted.
ReconcileResult reconcile_and_verify(const BitSequence& key_a, const BitSequence& key_b,
                                     int check_bits, std::uint64_t seed);

/// Compress `key` to output_length bits through the Toeplitz hash,
/// erasing short-ranged bit-cipher correlations. Deterministic in
/// (key, output_length, hash_seed).
BitSequence privacy_amplify(const BitSequence& key, std::size_t output_length,
                            std::uint64_t hash_seed);

}  // namespace mesokey::protocol
