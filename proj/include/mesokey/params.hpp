#pragma once

#include <stdexcept>
#include <string>

namespace mesokey {

/// Raised when a computation cannot meet its numerical validity contract
/// (insufficient truncation, eigensolver failure, out-of-range probability).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on unreadable/unwritable files and malformed on-disk formats.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// The parameter tuple governing every computation in the system:
/// mean photon number per bit, number of ciphering bases, cipher/bit
/// repetition count, and channel transmittance seen by the receiver.
struct SystemParams {
    double mean_photon_number = 1.0;  ///< <n> = |alpha|^2, photons per bit
    int num_bases = 1;                ///< M
    int repetition = 1;               ///< r, pulses per bit
    double transmittance = 1.0;       ///< eta in (0, 1], receiver side only

    /// Throws std::domain_error if any field is out of range.
    void validate() const;

    /// Photon number seen by an optimal eavesdropper sampling at the
    /// source: r * <n>. Transmittance never applies to the eavesdropper.
    double eavesdropper_photon_number() const {
        return mean_photon_number * static_cast<double>(repetition);
    }

    /// Photon number per pulse seen by the legitimate receiver: eta * <n>.
    double receiver_photon_number() const {
        return mean_photon_number * transmittance;
    }
};

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

bool is_power_of_two(int m);

/// K_M = log2(M) for power-of-two M (key bits consumed per basis choice).
/// Throws std::domain_error otherwise.
int key_bits_per_basis(int m);

/// Bits needed to index M levels: ceil(log2(M)), at least 1.
/// Accepts any M >= 1 (used by the analysis/speed-cost paths).
int bits_needed(int m);

}  // namespace mesokey
