#include "mesokey/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mesokey {

namespace {

// Index of the largest series term t_m = (x/2)^(2m+nu) / (m! (m+nu)!).
// Solving t_{m+1}/t_m = (x^2/4)/((m+1)(m+nu+1)) = 1 for m gives
// m* = (-(nu+1) + sqrt((nu+1)^2 + x^2)) / 2.
long peak_index(double nu, double x) {
    const double a = nu + 1.0;
    const double m = 0.5 * (std::sqrt(a * a + x * x) - a);
    return m <= 0.0 ? 0 : std::lround(m);
}

}  // namespace

double log_bessel_i_scaled(int order, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("log_bessel_i_scaled: x must be > 0");
    const double nu = std::abs(order);  // I_{-n} = I_n

    // The anchor term subtracts numbers of size ~x ln x; long double keeps
    // the cancellation error around 1e-14 at the (1e4, 1e4) corner.
    const long m0 = peak_index(nu, x);
    const long double log_half_x = std::log(0.5L * static_cast<long double>(x));
    const double base = static_cast<double>(
        (2.0L * m0 + static_cast<long double>(nu)) * log_half_x -
        std::lgamma(static_cast<long double>(m0 + 1)) -
        std::lgamma(static_cast<long double>(m0) + nu + 1.0L));

    const double q = 0.25 * x * x;
    constexpr double kCutoff = 1e-20;  // relative to the peak term

    // Terms relative to the peak, marching outward in both directions.
    // All terms are positive and decay monotonically away from the peak.
    double rest = 0.0;
    double t = 1.0;
    for (double m = static_cast<double>(m0); t >= kCutoff;) {
        t *= q / ((m + 1.0) * (m + nu + 1.0));
        m += 1.0;
        rest += t;
    }
    t = 1.0;
    for (double m = static_cast<double>(m0); m >= 1.0 && t >= kCutoff; m -= 1.0) {
        t *= m * (m + nu) / q;
        rest += t;
    }

    return base + std::log1p(rest) - x;
}

double bessel_i_scaled(int order, double x) {
    return std::exp(log_bessel_i_scaled(order, x));
}

}  // namespace mesokey
