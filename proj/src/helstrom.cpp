#include "mesokey/helstrom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "mesokey/bessel.hpp"
#include "mesokey/mry.hpp"

namespace mesokey::helstrom {

namespace {

constexpr double kEigenvalueFloor = 1e-13;   // eigensolver jitter cutoff
constexpr double kWeightDeficitTol = 1e-10;  // truncation validity gate

double positive_eigenvalue_sum(const Eigen::MatrixXcd& matrix) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("min_error_probability: eigensolver did not converge");
    double sum = 0.0;
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] > kEigenvalueFloor) sum += ev[i];
    return sum;
}

}  // namespace

TruncationSpec truncation_order(double mean_photon_number, double tail_epsilon) {
    if (!(mean_photon_number > 0.0))
        throw std::domain_error("truncation_order: photon number must be > 0");
    if (!(tail_epsilon > 0.0))
        throw std::domain_error("truncation_order: tail epsilon must be > 0");
    int q = 0;
    while (bessel_i_scaled(2 * q, mean_photon_number) >= tail_epsilon) ++q;
    return TruncationSpec{q, tail_epsilon};
}

std::complex<double> cipher_sum(int d, int num_bases) {
    if (num_bases < 1) throw std::domain_error("cipher_sum: M must be >= 1");
    std::complex<double> acc(0.0, 0.0);
    for (int k = 0; k < num_bases; ++k)
        acc += std::polar(1.0, mry::cipher_phase(k, num_bases).phase * d);
    return acc / static_cast<double>(num_bases);
}

std::complex<double> DeltaRhoMatrix::entry_q(double q_row, double q_col) const {
    const int r = lattice_radius();
    const long mr = std::lround(2.0 * q_row), mc = std::lround(2.0 * q_col);
    if (std::abs(mr) > r || std::abs(mc) > r)
        throw std::domain_error("DeltaRhoMatrix: index beyond truncation");
    return entries(mr + r, mc + r);
}

DeltaRhoMatrix build_delta_rho(const SystemParams& params, const TruncationSpec& trunc) {
    params.validate();
    if (trunc.max_order < 0)
        throw std::domain_error("build_delta_rho: truncation order must be >= 0");
    const double x = params.eavesdropper_photon_number();
    const int m_cap = 2 * trunc.max_order;  // largest Bessel order kept
    const int dim = 2 * m_cap + 1;
    const int big_m = params.num_bases;

    // Half log-weights: log(e^-x I_|m|(x)) / 2, so that the product
    // e^-x sqrt(I_|m| I_|m'|) = exp(hw[m] + hw[m']).
    std::vector<double> half_log_w(m_cap + 1);
    double captured = 0.0;
    for (int m = 0; m <= m_cap; ++m) {
        const double lw = log_bessel_i_scaled(m, x);
        half_log_w[m] = 0.5 * lw;
        captured += (m == 0 ? 1.0 : 2.0) * std::exp(lw);
    }
    if (1.0 - captured > kWeightDeficitTol)
        throw NumericalError("build_delta_rho: truncation captures only " +
                             std::to_string(captured) + " of the state weight");

    // Phase-ensemble sums over the 2M wheel grid points theta_j = pi*j/M,
    // signed +1 for bit-1 points and -1 for bit-0 points:
    //   T(delta) = (1/M) sum_j eps_j exp(i * theta_j * delta / 2).
    // The grid angles are the reduced total modulation phases, so the
    // exponent is evaluated with j*delta reduced exactly modulo 4M.
    const long period = 4L * big_m;
    std::vector<std::complex<double>> roots(period);
    for (long t = 0; t < period; ++t)
        roots[t] = std::polar(1.0, kPi * static_cast<double>(t) / (2.0 * big_m));
    std::vector<std::complex<double>> ensemble(2 * m_cap + 1 + 2 * m_cap);
    auto ensemble_at = [&](int delta) -> std::complex<double>& {
        return ensemble[delta + 2 * m_cap];
    };
    for (int delta = -2 * m_cap; delta <= 2 * m_cap; ++delta) {
        // For delta = 2(q-q') with q-q' an even integer the grid pairs
        // (j, j+M) carry equal phases and opposite signs: the sum is
        // identically zero, independent of M.
        if (((delta % 4) + 4) % 4 == 0) {
            ensemble_at(delta) = 0.0;
            continue;
        }
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < 2 * big_m; ++j) {
            const double sign = mry::wheel_grid_bit(j, big_m) ? 1.0 : -1.0;
            long t = (static_cast<long>(j) * delta) % period;
            if (t < 0) t += period;
            acc += sign * roots[t];
        }
        ensemble_at(delta) = acc / static_cast<double>(big_m);
    }

    DeltaRhoMatrix result;
    result.truncation = trunc;
    result.params = params;
    result.entries.resize(dim, dim);
    for (int row = 0; row < dim; ++row) {
        const int m_row = row - m_cap;
        for (int col = 0; col < dim; ++col) {
            const int m_col = col - m_cap;
            const std::complex<double> phase_sum = ensemble_at(m_row - m_col);
            if (phase_sum == std::complex<double>(0.0, 0.0)) {
                result.entries(row, col) = 0.0;
                continue;
            }
            const double weight =
                std::exp(half_log_w[std::abs(m_row)] + half_log_w[std::abs(m_col)]);
            result.entries(row, col) = weight * phase_sum;
        }
    }
    return result;
}

PeResult min_error_probability(const SystemParams& params, const TruncationSpec& trunc) {
    const DeltaRhoMatrix delta = build_delta_rho(params, trunc);
    double sum = positive_eigenvalue_sum(delta.entries);
    if (sum > 1.0 + 1e-10)
        throw NumericalError("min_error_probability: positive eigenvalue sum " +
                             std::to_string(sum) + " exceeds 1");
    sum = std::min(sum, 1.0);
    PeResult r;
    r.positive_eigenvalue_sum = sum;
    r.pe = 0.5 * (1.0 - sum);
    r.truncation = trunc;
    return r;
}

PeResult min_error_probability(const SystemParams& params) {
    params.validate();
    return min_error_probability(
        params, truncation_order(params.eavesdropper_photon_number()));
}

PeResult repetition_equivalent_pe(const SystemParams& params) {
    params.validate();
    SystemParams folded = params;
    folded.mean_photon_number = params.eavesdropper_photon_number();
    folded.repetition = 1;
    return min_error_probability(folded);
}

PeCurve pe_curve(std::span<const int> m_values, double mean_photon_number,
                 unsigned threads) {
    if (m_values.empty()) throw std::domain_error("pe_curve: empty M list");
    PeCurve curve(m_values.size());
    auto compute = [&](size_t i) {
        SystemParams p;
        p.mean_photon_number = mean_photon_number;
        p.num_bases = m_values[i];
        curve[i] = PeCurvePoint{m_values[i], mean_photon_number,
                                min_error_probability(p).pe};
    };
    if (threads <= 1 || m_values.size() == 1) {
        for (size_t i = 0; i < m_values.size(); ++i) compute(i);
        return curve;
    }
    std::vector<std::future<void>> workers;
    const unsigned lanes = std::min<unsigned>(threads, m_values.size());
    for (unsigned lane = 0; lane < lanes; ++lane) {
        workers.push_back(std::async(std::launch::async, [&, lane] {
            for (size_t i = lane; i < m_values.size(); i += lanes) compute(i);
        }));
    }
    for (auto& w : workers) w.get();
    return curve;
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double eve_mutual_information(double pe) {
    if (pe < 0.0 || pe > 1.0)
        throw std::domain_error("eve_mutual_information: pe must lie in [0, 1]");
    return 1.0 - binary_entropy(pe);
}

double information_balance(double ber_bob, double ber_eve, double sequence_length) {
    if (sequence_length < 1.0)
        throw std::domain_error("information_balance: L0 must be >= 1");
    const double balance =
        sequence_length * (binary_entropy(ber_eve) - binary_entropy(ber_bob));
    return std::clamp(balance, -sequence_length, sequence_length);
}

}  // namespace mesokey::helstrom
