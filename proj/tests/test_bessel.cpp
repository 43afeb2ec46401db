#include <cmath>

#include <doctest.h>

#include "mesokey/bessel.hpp"
#include "test_oracles.hpp"

using mesokey::bessel_i_scaled;
using mesokey::log_bessel_i_scaled;

TEST_CASE("matches the truncated series for small x") {
    // I_0(1) = 1.2660658777520083 (series value)
    CHECK(log_bessel_i_scaled(0, 1.0) ==
          doctest::Approx(std::log(1.2660658777520083) - 1.0).epsilon(1e-13));

    for (int nu : {0, 1, 2, 5, 17, 40}) {
        for (double x : {1e-3, 0.1, 0.9, 2.0, 7.5, 20.0}) {
            const double expect = oracles::bessel_log_series(nu, x);
            CHECK(log_bessel_i_scaled(nu, x) ==
                  doctest::Approx(expect).epsilon(1e-11));
        }
    }
}

TEST_CASE("matches the asymptotic expansion for large x") {
    for (double x : {2000.0, 5000.0, 1e4}) {
        CHECK(log_bessel_i_scaled(0, x) ==
              doctest::Approx(oracles::bessel_log_asymptotic(0, x)).epsilon(1e-12));
        // order-0 limit: -(1/2) ln(2 pi x)
        CHECK(log_bessel_i_scaled(0, x) ==
              doctest::Approx(-0.5 * std::log(2.0 * mesokey::kPi * x)).epsilon(1e-4));
    }
    for (int nu : {1, 3, 10}) {
        CHECK(log_bessel_i_scaled(nu, 8000.0) ==
              doctest::Approx(oracles::bessel_log_asymptotic(nu, 8000.0)).epsilon(1e-11));
    }
}

TEST_CASE("order much larger than x reduces to the leading term") {
    // ln(e^-x (x/2)^nu / nu!) with correction x^2/(4(nu+1)) below 1e-8
    const int nu = 10000;
    const double x = 0.01;
    const double lead = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) - x;
    CHECK(std::fabs(log_bessel_i_scaled(nu, x) - lead) < 1e-8);
}

TEST_CASE("extreme corners stay finite and ordered") {
    // full contract domain: order up to 1e4, x up to 1e4
    const double corner = log_bessel_i_scaled(10000, 1e4);
    CHECK(std::isfinite(corner));
    // scaled I is strictly decreasing in the order
    double prev = log_bessel_i_scaled(0, 1e4);
    for (int nu : {1, 10, 100, 1000, 10000}) {
        const double v = log_bessel_i_scaled(nu, 1e4);
        CHECK(v < prev);
        prev = v;
    }
    // negative order mirrors positive order
    CHECK(log_bessel_i_scaled(-7, 3.0) == log_bessel_i_scaled(7, 3.0));
    CHECK_THROWS_AS(log_bessel_i_scaled(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(log_bessel_i_scaled(0, -1.0), std::domain_error);
}

TEST_CASE("scaled values obey the generating-function identity") {
    // e^-x (I_0 + 2 sum I_k) = 1
    for (double x : {0.5, 3.0, 42.0, 300.0}) {
        double total = bessel_i_scaled(0, x);
        for (int k = 1; k < 3000; ++k) {
            const double term = 2.0 * bessel_i_scaled(k, x);
            total += term;
            if (term < 1e-18) break;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}
