#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mesokey/bits.hpp"
#include "mesokey/params.hpp"
#include "mesokey/rng.hpp"

namespace mesokey::channel {

/// One pulse as seen by a phase-sensitive detector.
struct MeasurementRecord {
    double true_phase = 0.0;      ///< phi_b + phi_k, reduced
    double measured_phase = 0.0;  ///< in [0, 2*pi)
    std::int64_t pulse_index = 0;
    int repetition_index = 0;
};

/// Gaussian phase-read model: measured = true + eps, eps ~ N(0, 1/n_eff).
/// Valid in the mesoscopic regime; the exact measurement statistics are
/// not simulated, the Helstrom floor keeps the strategies honest.
struct GaussianPhaseChannel {
    double sigma = 0.0;      ///< phase-noise standard deviation
    bool noiseless = false;  ///< n -> infinity limit

    /// Receiver-side channel: n_eff = eta * <n>.
    static GaussianPhaseChannel for_receiver(const SystemParams& params);
    /// Eavesdropper taps at the source: n_eff = <n>, no transmittance.
    static GaussianPhaseChannel for_eavesdropper(const SystemParams& params);
    static GaussianPhaseChannel exact();
};

MeasurementRecord transmit_one(double true_phase, const GaussianPhaseChannel& channel,
                               SplitMix64& rng, std::int64_t pulse_index = 0,
                               int repetition_index = 0);

/// r independent records of the same pulse phase.
std::vector<MeasurementRecord> transmit(double true_phase, const SystemParams& params,
                                        const GaussianPhaseChannel& channel,
                                        SplitMix64& rng, std::int64_t pulse_index = 0);

/// Circular mean of the measured phases (empty span is a domain error).
double mean_measured_phase(std::span<const MeasurementRecord> records);

/// Snap the measurement to the nearest of the 2M wheel grid points and
/// return that point's bit.
int eve_nearest_level(const MeasurementRecord& record, int num_bases);

/// Maximum a-posteriori bit guess under the Gaussian read model:
/// argmax_b sum_k exp(-dist(measured, phi_k + b*pi)^2 / (2 sigma^2)),
/// circular distance, sigma^2 = 1/n. Ties resolve to bit 0.
int eve_map_guess(const MeasurementRecord& record, int num_bases,
                  double mean_photon_number);

/// Replay stored records through the receiver's demodulation once the
/// key (basis sequence) is available: one basis per bit, r consecutive
/// records per bit. Bit decisions equal the legitimate receiver's on the
/// same noise realizations.
BitSequence eve_keyed_replay(std::span<const MeasurementRecord> records,
                             std::span<const int> key_bases, int num_bases,
                             int repetition);

struct BerEstimate {
    double ber = 0.0;
    double std_error = 0.0;  ///< sqrt(ber * (1 - ber) / trials)
    long trials = 0;
};

enum class EveStrategy { Nearest, Map, Keyed };

/// Strategy id from "nearest" | "map" | "keyed"; throws on anything else.
EveStrategy strategy_from_name(std::string_view name);
std::string_view strategy_name(EveStrategy s);

/// Monte Carlo bit-error rate of a strategy over fresh random (bit, basis)
/// pulses. Trial i draws its own generator from derive_seed(seed, i), so
/// the pooled estimate does not depend on how trials are partitioned.
BerEstimate monte_carlo_ber(EveStrategy strategy, const SystemParams& params,
                            long trials, std::uint64_t seed);

struct XorMismatchResult {
    double rate = 0.0;             ///< fraction of trials with r_i ^ r_j != 0
    double predicted_rate = 0.0;   ///< 2 p (1 - p) from the measured p
    double single_read_ber = 0.0;  ///< p, keyless single-read error rate
    double rate_std_error = 0.0;
    long trials = 0;
};

/// Noisy-XOR experiment: the same bit is sent twice in the same basis; a
/// keyless reader decodes both pulses independently and XORs the
/// decisions. Under quantum noise the XOR of two reads of one bit is
/// nonzero at rate 2p(1-p).
XorMismatchResult keyless_xor_mismatch(const SystemParams& params, long trials,
                                       std::uint64_t seed);

}  // namespace mesokey::channel
