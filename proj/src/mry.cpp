#include "mesokey/mry.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mesokey {

bool is_power_of_two(int m) { return m >= 1 && (m & (m - 1)) == 0; }

int key_bits_per_basis(int m) {
    if (!is_power_of_two(m))
        throw std::domain_error("key_bits_per_basis: M must be a power of two, got " +
                                std::to_string(m));
    int bits = 0;
    while ((1 << bits) < m) ++bits;
    return bits;
}

int bits_needed(int m) {
    if (m < 1) throw std::domain_error("bits_needed: M must be >= 1");
    int bits = 1;
    while ((1L << bits) < m) ++bits;
    return bits;
}

void SystemParams::validate() const {
    if (!(mean_photon_number > 0.0) || !std::isfinite(mean_photon_number))
        throw std::domain_error("SystemParams: mean_photon_number must be > 0");
    if (num_bases < 1)
        throw std::domain_error("SystemParams: num_bases must be >= 1");
    if (repetition < 1)
        throw std::domain_error("SystemParams: repetition must be >= 1");
    if (!(transmittance > 0.0) || transmittance > 1.0)
        throw std::domain_error("SystemParams: transmittance must be in (0, 1]");
}

}  // namespace mesokey

namespace mesokey::mry {

double reduce_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double circular_distance(double a, double b) {
    double d = std::fabs(reduce_angle(a) - reduce_angle(b));
    return d > kPi ? kTwoPi - d : d;
}

WheelPhase cipher_phase(int k, int num_bases) {
    if (num_bases < 1) throw std::domain_error("cipher_phase: M must be >= 1");
    if (k < 0 || k >= num_bases)
        throw std::domain_error("cipher_phase: basis index " + std::to_string(k) +
                                " out of [0, " + std::to_string(num_bases) + ")");
    const double odd_offset = (k % 2 == 0) ? 0.0 : 1.0;
    const double phase = kPi * (static_cast<double>(k) / num_bases + odd_offset);
    return WheelPhase{k, reduce_angle(phase)};
}

double bases_overlap(double delta_phi, double mean_photon_number) {
    if (mean_photon_number < 0.0 || !std::isfinite(mean_photon_number))
        throw std::domain_error("bases_overlap: photon number must be >= 0");
    return std::exp(-2.0 * mean_photon_number * (1.0 - std::cos(0.5 * delta_phi)));
}

double angle_sigma(double mean_photon_number) {
    if (!(mean_photon_number > 0.0))
        throw std::domain_error("angle_sigma: photon number must be > 0");
    return 1.0 / std::sqrt(mean_photon_number);
}

double bases_within_sigma(const SystemParams& params) {
    params.validate();
    const double n_eff = params.mean_photon_number * params.repetition * params.transmittance;
    return params.num_bases / (kPi * std::sqrt(n_eff));
}

std::pair<double, double> apriori_parity_probs(int num_bases) {
    if (num_bases < 1) throw std::domain_error("apriori_parity_probs: M must be >= 1");
    const double m = num_bases;
    const double sign = (num_bases % 2 == 0) ? 1.0 : -1.0;
    const double p_even = (1.0 - sign + 2.0 * m) / (4.0 * m);
    const double p_odd = (-1.0 + sign + 2.0 * m) / (4.0 * m);
    return {p_even, p_odd};
}

PhaseShiftLimits phase_shift_limits(double photon_number, int num_bases) {
    if (!(photon_number > 0.0))
        throw std::domain_error("phase_shift_limits: photon number must be > 0");
    if (num_bases < 1) throw std::domain_error("phase_shift_limits: M must be >= 1");
    PhaseShiftLimits lim;
    lim.sql = 1.0 / std::sqrt(photon_number);
    lim.squeezed = 1.0 / std::pow(photon_number, 0.75);
    lim.heisenberg = static_cast<double>(num_bases) / photon_number;
    return lim;
}

int heisenberg_min_bases(double photon_number) {
    if (!(photon_number > 0.0))
        throw std::domain_error("heisenberg_min_bases: photon number must be > 0");
    return static_cast<int>(std::floor(std::sqrt(kPi * photon_number))) + 1;
}

bool phase_indistinguishable(double photon_number, int num_bases) {
    if (!(photon_number > 0.0))
        throw std::domain_error("phase_indistinguishable: photon number must be > 0");
    return num_bases > std::sqrt(kPi * photon_number);
}

double polarization_overlap(const PoincarePoint& a, const PoincarePoint& b,
                            double mean_photon_number) {
    if (mean_photon_number < 0.0 || !std::isfinite(mean_photon_number))
        throw std::domain_error("polarization_overlap: photon number must be >= 0");
    if (a.theta < 0.0 || a.theta > kPi || b.theta < 0.0 || b.theta > kPi)
        throw std::domain_error("polarization_overlap: theta must lie in [0, pi]");

    using cd = std::complex<double>;
    const cd plus(1.0, 1.0), minus(1.0, -1.0);
    auto projections = [&](const PoincarePoint& p) {
        const double c = std::cos(0.5 * p.theta);
        const double s = std::sin(0.5 * p.theta);
        const cd e = std::polar(1.0, 0.5 * p.phi);
        const cd gamma = minus * e * c + plus * std::conj(e) * s;
        const cd delta = plus * e * c + minus * std::conj(e) * s;
        // The raw projections carry |gamma|^2 + |delta|^2 = 4; halving them
        // normalises the two-mode energy to |alpha|^2.
        return std::pair<cd, cd>(0.5 * gamma, 0.5 * delta);
    };

    const auto [ga, da] = projections(a);
    const auto [gb, db] = projections(b);
    const double dist2 = std::norm(ga - gb) + std::norm(da - db);
    return std::exp(-mean_photon_number * dist2);
}

int wheel_grid_bit(int grid_index, int num_bases) {
    if (num_bases < 1) throw std::domain_error("wheel_grid_bit: M must be >= 1");
    const int two_m = 2 * num_bases;
    int j = grid_index % two_m;
    if (j < 0) j += two_m;
    const int k = j % num_bases;
    return ((j >= num_bases) ? 1 : 0) ^ (k & 1);
}

RepetitionScaling repetition_scaling(int num_bases) {
    if (num_bases < 1) throw std::domain_error("repetition_scaling: M must be >= 1");
    RepetitionScaling s;
    s.repetition = 2 * bits_needed(num_bases);
    s.m_new = std::lround(num_bases * std::sqrt(static_cast<double>(s.repetition)));
    s.k_new = bits_needed(static_cast<int>(s.m_new));
    s.rate_scale = 1.0 / (2.0 * s.k_new);
    return s;
}

}  // namespace mesokey::mry
