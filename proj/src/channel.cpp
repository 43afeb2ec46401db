#include "mesokey/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mesokey/mry.hpp"
#include "mesokey/protocol.hpp"

namespace mesokey::channel {

GaussianPhaseChannel GaussianPhaseChannel::for_receiver(const SystemParams& params) {
    params.validate();
    return {1.0 / std::sqrt(params.receiver_photon_number()), false};
}

GaussianPhaseChannel GaussianPhaseChannel::for_eavesdropper(const SystemParams& params) {
    params.validate();
    return {1.0 / std::sqrt(params.mean_photon_number), false};
}

GaussianPhaseChannel GaussianPhaseChannel::exact() { return {0.0, true}; }

MeasurementRecord transmit_one(double true_phase, const GaussianPhaseChannel& channel,
                               SplitMix64& rng, std::int64_t pulse_index,
                               int repetition_index) {
    MeasurementRecord rec;
    rec.true_phase = mry::reduce_angle(true_phase);
    rec.pulse_index = pulse_index;
    rec.repetition_index = repetition_index;
    if (channel.noiseless) {
        rec.measured_phase = rec.true_phase;
    } else {
        rec.measured_phase =
            mry::reduce_angle(rec.true_phase + channel.sigma * rng.next_gaussian());
    }
    return rec;
}

std::vector<MeasurementRecord> transmit(double true_phase, const SystemParams& params,
                                        const GaussianPhaseChannel& channel,
                                        SplitMix64& rng, std::int64_t pulse_index) {
    params.validate();
    std::vector<MeasurementRecord> records;
    records.reserve(params.repetition);
    for (int rep = 0; rep < params.repetition; ++rep)
        records.push_back(transmit_one(true_phase, channel, rng, pulse_index, rep));
    return records;
}

double mean_measured_phase(std::span<const MeasurementRecord> records) {
    if (records.empty())
        throw std::domain_error("mean_measured_phase: no records");
    if (records.size() == 1) return records[0].measured_phase;
    double re = 0.0, im = 0.0;
    for (const auto& rec : records) {
        re += std::cos(rec.measured_phase);
        im += std::sin(rec.measured_phase);
    }
    return mry::reduce_angle(std::atan2(im, re));
}

int eve_nearest_level(const MeasurementRecord& record, int num_bases) {
    if (num_bases < 1) throw std::domain_error("eve_nearest_level: M must be >= 1");
    // Grid points are pi*j/M for j in [0, 2M).
    const long two_m = 2L * num_bases;
    long j = std::lround(record.measured_phase * num_bases / kPi) % two_m;
    if (j < 0) j += two_m;
    return mry::wheel_grid_bit(static_cast<int>(j), num_bases);
}

int eve_map_guess(const MeasurementRecord& record, int num_bases,
                  double mean_photon_number) {
    if (num_bases < 1) throw std::domain_error("eve_map_guess: M must be >= 1");
    if (!(mean_photon_number > 0.0))
        throw std::domain_error("eve_map_guess: photon number must be > 0");
    const double inv_two_sigma_sq = 0.5 * mean_photon_number;
    double score[2] = {0.0, 0.0};
    for (int j = 0; j < 2 * num_bases; ++j) {
        const double level = kPi * j / num_bases;
        const double d = mry::circular_distance(record.measured_phase, level);
        score[mry::wheel_grid_bit(j, num_bases)] += std::exp(-d * d * inv_two_sigma_sq);
    }
    return score[1] > score[0] ? 1 : 0;
}

BitSequence eve_keyed_replay(std::span<const MeasurementRecord> records,
                             std::span<const int> key_bases, int num_bases,
                             int repetition) {
    if (repetition < 1)
        throw std::domain_error("eve_keyed_replay: repetition must be >= 1");
    if (records.size() != key_bases.size() * static_cast<std::size_t>(repetition))
        throw std::domain_error(
            "eve_keyed_replay: record count does not match bases * repetition");
    BitSequence bits;
    bits.reserve(key_bases.size());
    for (std::size_t i = 0; i < key_bases.size(); ++i) {
        const auto group = records.subspan(i * repetition, repetition);
        const double phase = mean_measured_phase(group);
        bits.push_back(static_cast<std::uint8_t>(
            protocol::demodulate(phase, key_bases[i], num_bases)));
    }
    return bits;
}

EveStrategy strategy_from_name(std::string_view name) {
    if (name == "nearest") return EveStrategy::Nearest;
    if (name == "map") return EveStrategy::Map;
    if (name == "keyed") return EveStrategy::Keyed;
    throw std::domain_error("unknown eavesdropper strategy '" + std::string(name) +
                            "' (expected nearest|map|keyed)");
}

std::string_view strategy_name(EveStrategy s) {
    switch (s) {
        case EveStrategy::Nearest: return "nearest";
        case EveStrategy::Map: return "map";
        case EveStrategy::Keyed: return "keyed";
    }
    return "?";
}

BerEstimate monte_carlo_ber(EveStrategy strategy, const SystemParams& params,
                            long trials, std::uint64_t seed) {
    params.validate();
    if (trials < 1000)
        throw std::domain_error("monte_carlo_ber: need at least 1e3 trials");

    const auto eve_channel = GaussianPhaseChannel::for_eavesdropper(params);
    const double n_eff = params.eavesdropper_photon_number();
    long errors = 0;
    for (long t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const int bit = rng.next_bit();
        const int k = static_cast<int>(rng.next_below(params.num_bases));
        const double phase = protocol::modulate(bit, k, params.num_bases);
        const auto records = transmit(phase, params, eve_channel, rng, t);

        MeasurementRecord pooled = records[0];
        pooled.measured_phase = mean_measured_phase(records);

        int guess = 0;
        switch (strategy) {
            case EveStrategy::Nearest:
                guess = eve_nearest_level(pooled, params.num_bases);
                break;
            case EveStrategy::Map:
                // Averaging r reads shrinks the effective variance to 1/(r n).
                guess = eve_map_guess(pooled, params.num_bases, n_eff);
                break;
            case EveStrategy::Keyed:
                guess = protocol::demodulate(pooled.measured_phase, k, params.num_bases);
                break;
        }
        if (guess != bit) ++errors;
    }

    BerEstimate est;
    est.trials = trials;
    est.ber = static_cast<double>(errors) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.ber * (1.0 - est.ber) / static_cast<double>(trials));
    return est;
}

XorMismatchResult keyless_xor_mismatch(const SystemParams& params, long trials,
                                       std::uint64_t seed) {
    params.validate();
    if (trials < 1) throw std::domain_error("keyless_xor_mismatch: trials must be >= 1");

    const auto eve_channel = GaussianPhaseChannel::for_eavesdropper(params);
    // Fixed bit 0 in basis 0, re-sent over and over; single-shot reads.
    const double phase = protocol::modulate(0, 0, params.num_bases);
    long mismatches = 0;
    long read_errors = 0;
    for (long t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const auto first = transmit_one(phase, eve_channel, rng, 2 * t, 0);
        const auto second = transmit_one(phase, eve_channel, rng, 2 * t + 1, 0);
        const int r1 = eve_nearest_level(first, params.num_bases);
        const int r2 = eve_nearest_level(second, params.num_bases);
        if (r1 != r2) ++mismatches;
        read_errors += (r1 != 0) + (r2 != 0);
    }

    XorMismatchResult r;
    r.trials = trials;
    r.rate = static_cast<double>(mismatches) / static_cast<double>(trials);
    r.single_read_ber =
        static_cast<double>(read_errors) / (2.0 * static_cast<double>(trials));
    r.predicted_rate = 2.0 * r.single_read_ber * (1.0 - r.single_read_ber);
    r.rate_std_error = std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(trials));
    return r;
}

}  // namespace mesokey::channel
