#pragma once

#include <utility>

#include "mesokey/params.hpp"

namespace mesokey::mry {

/// Reduce an angle into [0, 2*pi).
double reduce_angle(double a);

/// Circular distance min(|a-b|, 2pi-|a-b|) after reduction.
double circular_distance(double a, double b);

/// One location on the ciphering wheel.
struct WheelPhase {
    int basis_index;  ///< k in [0, M)
    double phase;     ///< radians, reduced into [0, 2*pi)
};

/// Point on the Poincare sphere, theta in [0, pi], phi in [0, 2*pi).
struct PoincarePoint {
    double theta;
    double phi;
};

/// Wheel phase of basis k out of M:
///   phi_k = pi * [k/M + (1 - (-1)^k)/2], reduced into [0, 2*pi).
/// Even k sit on the first half-turn, odd k are offset by pi so that
/// neighbouring wheel positions carry mostly opposite bit values.
WheelPhase cipher_phase(int k, int num_bases);

/// Squared overlap of two ciphered coherent states separated by
/// delta_phi on a common great circle: exp(-2n * (1 - cos(delta_phi/2))).
double bases_overlap(double delta_phi, double mean_photon_number);

/// Shot-noise angle uncertainty sigma = 1/sqrt(n).
double angle_sigma(double mean_photon_number);

/// Number of bases covered by one standard deviation of the angle noise:
///   N_sigma = M / (pi * sqrt(n_eff)),  n_eff = r * eta * <n>.
/// Returned as a real, never rounded (it is a fractional coverage measure).
double bases_within_sigma(const SystemParams& params);

/// A-priori probabilities of an even-k / odd-k basis under uniform k:
///   p_even = (1 - (-1)^M + 2M) / (4M),  p_odd = (-1 + (-1)^M + 2M) / (4M).
std::pair<double, double> apriori_parity_probs(int num_bases);

/// Smallest detectable phase shifts for a pulse of N photons when only
/// the fraction 1/M of it probes the right wheel sector.
struct PhaseShiftLimits {
    double sql;        ///< standard quantum limit, 1/sqrt(N)
    double squeezed;   ///< squeezed-light limit, 1/N^(3/4)
    double heisenberg; ///< Heisenberg limit with the 1/M fraction, M/N
};

PhaseShiftLimits phase_shift_limits(double photon_number, int num_bases);

/// Smallest integer M with M > sqrt(pi*N): floor(sqrt(pi*N)) + 1.
int heisenberg_min_bases(double photon_number);

/// True when even a Heisenberg-limited measurement cannot resolve the
/// wheel spacing pi/M, i.e. M > sqrt(pi*N).
bool phase_indistinguishable(double photon_number, int num_bases);

/// Squared overlap |<Psi(a)|Psi(b)>|^2 of two polarization states,
/// computed from the two-mode coherent-state inner product through the
/// x/y projections of the state manifold (energy normalised to |alpha|^2).
/// On a common great circle this equals bases_overlap(b.phi - a.phi, n).
double polarization_overlap(const PoincarePoint& a, const PoincarePoint& b,
                            double mean_photon_number);

/// Bit carried by point j of the 2M-point demodulation grid at angle
/// pi*j/M. Grid point j is basis k = j mod M; the bit follows from
/// whether pi*j/M equals phi_k or phi_k + pi (mod 2*pi).
int wheel_grid_bit(int grid_index, int num_bases);

/// Repetition overhead of keeping N_sigma constant under r = 2*K_M
/// cipher repetitions (K_M = bits_needed(M)).
struct RepetitionScaling {
    int repetition;     ///< r = 2 * bits_needed(M)
    long m_new;         ///< round(M * sqrt(r)), levels needed after scaling
    int k_new;          ///< bits_needed(m_new)
    double rate_scale;  ///< 1 / (2 * k_new), output-rate reduction factor
};

RepetitionScaling repetition_scaling(int num_bases);

}  // namespace mesokey::mry
