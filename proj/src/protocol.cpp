#include "mesokey/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "mesokey/lfsr.hpp"
#include "mesokey/mry.hpp"

namespace mesokey::protocol {

char role_letter(Role r) { return r == Role::A ? 'A' : 'B'; }

int key_block_to_basis(std::span<const std::uint8_t> block) {
    if (block.empty() || block.size() > 30)
        throw std::domain_error("key_block_to_basis: block length out of range");
    int k = 0;
    for (auto b : block) {
        if (b > 1) throw std::domain_error("key_block_to_basis: non-bit value");
        k = (k << 1) | b;
    }
    return k;
}

double modulate(int bit, int basis_index, int num_bases) {
    if (bit != 0 && bit != 1) throw std::domain_error("modulate: bit must be 0 or 1");
    const double phi_k = mry::cipher_phase(basis_index, num_bases).phase;
    return mry::reduce_angle(bit * kPi + phi_k);
}

int demodulate(double measured_phase, int basis_index, int num_bases) {
    const double phi_k = mry::cipher_phase(basis_index, num_bases).phase;
    const double relative = mry::reduce_angle(measured_phase - phi_k);
    const double dist0 = mry::circular_distance(relative, 0.0);
    const double dist1 = mry::circular_distance(relative, kPi);
    return dist0 <= dist1 ? 0 : 1;
}

namespace {

std::vector<int> bases_from_key(const BitSequence& running_key, int num_bases,
                                std::size_t l0, CipherMode mode) {
    const int k_m = key_bits_per_basis(num_bases);
    if (mode == CipherMode::Block) {
        std::vector<int> bases;
        bases.reserve(l0 / k_m);
        for (std::size_t off = 0; off + k_m <= running_key.size(); off += k_m)
            bases.push_back(key_block_to_basis(
                std::span<const std::uint8_t>(running_key).subspan(off, k_m)));
        return bases;
    }
    // LFSR variant: the leading key block seeds the register, every fresh
    // bit gets its own basis. Both stations hold the same running key, so
    // both make the same substitution when the block is all-zero (the one
    // state outside the register's orbit): the all-ones state.
    LfsrSpec spec;
    spec.width = k_m;
    spec.taps = default_taps(k_m);
    spec.seed.assign(running_key.begin(), running_key.begin() + k_m);
    bool all_zero = true;
    for (auto b : spec.seed) all_zero = all_zero && b == 0;
    if (all_zero) spec.seed.assign(k_m, 1);
    return lfsr_expand(spec, l0);
}

}  // namespace

CycleRecord run_cycle(StationState& sender, StationState& receiver,
                      const SystemParams& params,
                      const channel::GaussianPhaseChannel& channel,
                      SplitMix64& noise_rng, CipherMode mode, bool record_pulses) {
    params.validate();
    if (!is_power_of_two(params.num_bases))
        throw std::domain_error("run_cycle: protocol requires a power-of-two M");
    const int k_m = key_bits_per_basis(params.num_bases);
    const std::size_t l0 = sender.running_key.size();
    if (l0 == 0 || l0 % static_cast<std::size_t>(k_m) != 0)
        throw std::domain_error("run_cycle: L0 must be a non-zero multiple of K_M");
    if (receiver.running_key.size() != l0)
        throw std::domain_error("run_cycle: stations disagree on L0");

    CycleRecord record;
    record.cycle_index = sender.cycle_index;
    record.sender_role = sender.role;
    record.plain_bits = sender.draw_fresh_bits(l0);
    record.bases_used = bases_from_key(sender.running_key, params.num_bases, l0, mode);

    // Receiver derives the identical basis sequence from its own key copy.
    const auto receiver_bases =
        bases_from_key(receiver.running_key, params.num_bases, l0, mode);

    record.receiver_bits.reserve(l0);
    if (record_pulses) record.pulses.reserve(l0 * params.repetition);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < l0; ++i) {
        const int sender_basis = (mode == CipherMode::Block)
                                     ? record.bases_used[i / k_m]
                                     : record.bases_used[i];
        const int receiver_basis =
            (mode == CipherMode::Block) ? receiver_bases[i / k_m] : receiver_bases[i];
        const double phase =
            modulate(record.plain_bits[i], sender_basis, params.num_bases);
        const auto pulses = channel::transmit(phase, params, channel, noise_rng,
                                              static_cast<std::int64_t>(i));
        const double read = channel::mean_measured_phase(pulses);
        const int bit = demodulate(read, receiver_basis, params.num_bases);
        record.receiver_bits.push_back(static_cast<std::uint8_t>(bit));
        if (bit != record.plain_bits[i]) ++errors;
        if (record_pulses)
            record.pulses.insert(record.pulses.end(), pulses.begin(), pulses.end());
    }
    record.receiver_ber = static_cast<double>(errors) / static_cast<double>(l0);

    sender.running_key = record.plain_bits;
    receiver.running_key = record.receiver_bits;
    ++sender.cycle_index;
    ++receiver.cycle_index;
    return record;
}

Transcript run_protocol(int cycles, const SystemParams& params,
                        const channel::GaussianPhaseChannel& channel,
                        const BitSequence& initial_key, std::uint64_t seed_a,
                        std::uint64_t seed_b, std::uint64_t noise_seed, CipherMode mode,
                        bool record_pulses) {
    if (cycles < 1) throw std::domain_error("run_protocol: cycles must be >= 1");
    params.validate();

    StationState station_a(Role::A, initial_key, seed_a);
    StationState station_b(Role::B, initial_key, seed_b);
    SplitMix64 noise_rng(noise_seed);

    Transcript transcript;
    transcript.cycles.reserve(cycles);
    for (int c = 0; c < cycles; ++c) {
        StationState& sender = (c % 2 == 0) ? station_a : station_b;
        StationState& receiver = (c % 2 == 0) ? station_b : station_a;
        transcript.cycles.push_back(
            run_cycle(sender, receiver, params, channel, noise_rng, mode, record_pulses));
        if (transcript.cycles.back().receiver_ber > 0.0) {
            transcript.diverged = true;
            transcript.diverged_cycle = c;
            break;
        }
    }
    transcript.final_key_a = station_a.running_key;
    transcript.final_key_b = station_b.running_key;
    return transcript;
}

}  // namespace mesokey::protocol
