#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mesokey/bits.hpp"
#include "mesokey/channel.hpp"
#include "mesokey/params.hpp"
#include "mesokey/rng.hpp"

namespace mesokey::protocol {

enum class Role { A, B };
char role_letter(Role r);

/// How the running key turns into basis choices.
///  Block: each K_M-bit block of the running key ciphers one K_M-bit
///         block of fresh bits (L0/K_M blocks per cycle).
///  Lfsr:  the first K_M bits of the running key seed an LFSR whose
///         successive states cipher the fresh bits one by one.
enum class CipherMode { Block, Lfsr };

/// One station. The running key is replaced every cycle by the freshly
/// exchanged sequence; the rng stands in for the physical random
/// generator and is deterministic given the seed. To drive a station
/// from a real entropy source instead, install `entropy_source`; it
/// takes precedence over the seeded generator.
struct StationState {
    Role role;
    BitSequence running_key;
    std::uint64_t rng_seed;
    std::uint64_t cycle_index = 0;
    SplitMix64 rng;
    std::function<BitSequence(std::size_t)> entropy_source;

    StationState(Role role_, BitSequence key, std::uint64_t seed)
        : role(role_), running_key(std::move(key)), rng_seed(seed), rng(seed) {}

    BitSequence draw_fresh_bits(std::size_t count) {
        return entropy_source ? entropy_source(count) : random_bits(rng, count);
    }
};

/// Everything observable about one protocol cycle.
struct CycleRecord {
    std::uint64_t cycle_index = 0;
    Role sender_role = Role::A;
    BitSequence plain_bits;                           ///< fresh sequence R_i
    std::vector<int> bases_used;                      ///< one per block (or per bit)
    std::vector<channel::MeasurementRecord> pulses;   ///< L0 * r records
    BitSequence receiver_bits;
    double receiver_ber = 0.0;
};

struct Transcript {
    std::vector<CycleRecord> cycles;
    BitSequence final_key_a;
    BitSequence final_key_b;
    bool diverged = false;
    std::int64_t diverged_cycle = -1;
};

/// Big-endian value of a K_M-bit block: k = sum block[i] * 2^(K_M-1-i).
int key_block_to_basis(std::span<const std::uint8_t> block);

/// Total pulse phase (phi_b + phi_k) mod 2*pi, phi_b = bit * pi.
double modulate(int bit, int basis_index, int num_bases);

/// Subtract phi_k and decide the nearer of {0, pi}; a tie (distance
/// exactly pi/2) resolves to bit 0.
int demodulate(double measured_phase, int basis_index, int num_bases);

/// One chained half-cycle: the sender draws L0 fresh bits, ciphers them
/// on bases selected by the shared running key, and both stations
/// replace their running keys (sender with the true bits, receiver with
/// what it decoded). L0 must be divisible by K_M and M a power of two.
CycleRecord run_cycle(StationState& sender, StationState& receiver,
                      const SystemParams& params,
                      const channel::GaussianPhaseChannel& channel,
                      SplitMix64& noise_rng, CipherMode mode = CipherMode::Block,
                      bool record_pulses = true);

/// Full chained exchange: roles alternate starting with A as sender.
/// Aborts with a flagged transcript as soon as a cycle's receiver
/// decodes any bit wrong (the chain would silently desynchronise).
Transcript run_protocol(int cycles, const SystemParams& params,
                        const channel::GaussianPhaseChannel& channel,
                        const BitSequence& initial_key, std::uint64_t seed_a,
                        std::uint64_t seed_b, std::uint64_t noise_seed,
                        CipherMode mode = CipherMode::Block,
                        bool record_pulses = true);

/// Line-delimited transcript text: header, one record per cycle
/// (index, sender, BER, base-64 payloads), final-keys trailer.
std::string transcript_to_text(const Transcript& transcript);
Transcript transcript_from_text(std::string_view text);

}  // namespace mesokey::protocol
