#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mesokey/params.hpp"

namespace mesokey::helstrom {

/// Cutoff for the angular-momentum expansion: q ranges over [-Q, Q]
/// (Bessel orders up to 2Q), chosen so that e^-x * I_2Q(x) < tail_epsilon.
struct TruncationSpec {
    int max_order = 0;            ///< Q
    double tail_epsilon = 1e-14;
};

/// Smallest Q with e^-n * I_2Q(n) < eps.
TruncationSpec truncation_order(double mean_photon_number, double tail_epsilon = 1e-14);

/// Ciphering-wheel character sum (1/M) * sum_k exp(i * phi_k * d).
/// |result| <= 1; exactly 1 at d = 0.
std::complex<double> cipher_sum(int d, int num_bases);

/// Truncated Hermitian representation of rho_1 - rho_0 over the
/// angular-momentum ladder. The lattice index m = 2q runs over
/// [-2Q, 2Q] in half-steps of q so that both photon-number parities of
/// the two-mode state are represented; dropping the odd-parity rungs
/// (integer q only) loses half the state's weight and breaks the
/// two-pure-state limit. Entries vanish identically whenever q' - q is
/// an even integer.
struct DeltaRhoMatrix {
    Eigen::MatrixXcd entries;  ///< (4Q+1) x (4Q+1), row/col index m+2Q
    TruncationSpec truncation;
    SystemParams params;

    int lattice_radius() const { return 2 * truncation.max_order; }  ///< max |m|
    int dimension() const { return static_cast<int>(entries.rows()); }

    std::complex<double> entry_q(double q_row, double q_col) const;
};

/// Build Delta-rho for the M-ry wheel at the eavesdropper's effective
/// photon number r * <n>. Bessel weights are combined in log space.
/// Throws NumericalError when the truncation captures less than
/// 1 - 1e-10 of the state's weight.
DeltaRhoMatrix build_delta_rho(const SystemParams& params, const TruncationSpec& trunc);

/// Minimum-error discrimination result for equal priors.
struct PeResult {
    double pe = 0.5;                      ///< in [0, 1/2]
    double positive_eigenvalue_sum = 0.0; ///< in [0, 1]
    TruncationSpec truncation;
};

/// Eavesdropper's minimum probability of error: eigendecompose the
/// Hermitian Delta-rho, sum the positive eigenvalues L+, and return
/// pe = (1 - L+) / 2 for equal a-priori probabilities.
PeResult min_error_probability(const SystemParams& params);
PeResult min_error_probability(const SystemParams& params, const TruncationSpec& trunc);

/// Identical to min_error_probability with <n> replaced by r * <n>;
/// shares the code path bit for bit.
PeResult repetition_equivalent_pe(const SystemParams& params);

struct PeCurvePoint {
    int num_bases;
    double mean_photon_number;
    double pe;
};
using PeCurve = std::vector<PeCurvePoint>;

/// pe as a function of M at fixed n. Points are independent; with
/// threads > 1 they are computed concurrently and stored by index, so
/// the result is identical for every thread count.
PeCurve pe_curve(std::span<const int> m_values, double mean_photon_number,
                 unsigned threads = 1);

/// Binary entropy h(p) in bits, with 0*log2(0) == 0.
double binary_entropy(double p);

/// Information an eavesdropper obtains per bit at error rate pe:
/// I = 1 + pe*log2(pe) + (1-pe)*log2(1-pe) = 1 - h(pe). Range [0, 1].
double eve_mutual_information(double pe);

/// Mutual-information difference over a sequence of length L0:
/// dI = L0 * [h(ber_eve) - h(ber_bob)], clamped to [-L0, L0].
double information_balance(double ber_bob, double ber_eve, double sequence_length);

}  // namespace mesokey::helstrom
