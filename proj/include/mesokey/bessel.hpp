#pragma once

namespace mesokey {

/// ln(e^-x * I_order(x)) for the modified Bessel function of the first
/// kind, evaluated without overflow or underflow for orders up to 1e4
/// and x up to 1e4 (and beyond). Accuracy ~1e-12 relative in the log.
///
/// The power series sum_m (x/2)^(2m+order) / (m! (m+order)!) has strictly
/// positive terms, so it is summed anchored at its largest term in log
/// space; no cancellation occurs and no regime switching is needed.
double log_bessel_i_scaled(int order, double x);

/// e^-x * I_order(x). Convenience wrapper over the log form.
double bessel_i_scaled(int order, double x);

}  // namespace mesokey
