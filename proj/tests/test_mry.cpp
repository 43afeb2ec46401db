#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "mesokey/mry.hpp"
#include "mesokey/protocol.hpp"
#include "mesokey/rng.hpp"
#include "test_oracles.hpp"

using namespace mesokey;
using namespace mesokey::mry;

TEST_CASE("cipher phase matches the wheel formula") {
    CHECK(cipher_phase(0, 4).phase == doctest::Approx(0.0));
    CHECK(cipher_phase(1, 4).phase == doctest::Approx(5.0 * kPi / 4.0));
    CHECK(cipher_phase(2, 4).phase == doctest::Approx(kPi / 2.0));
    CHECK(cipher_phase(3, 4).phase == doctest::Approx(7.0 * kPi / 4.0));

    // k = M-1 for even M, reduced into [0, 2pi)
    const int m = 16;
    const double expect = std::fmod(kPi * ((m - 1.0) / m + 1.0), kTwoPi);
    CHECK(cipher_phase(m - 1, m).phase == doctest::Approx(expect));

    CHECK_THROWS_AS(cipher_phase(-1, 4), std::domain_error);
    CHECK_THROWS_AS(cipher_phase(4, 4), std::domain_error);
}

TEST_CASE("cipher phase is injective over the wheel") {
    for (int m : {1, 2, 3, 4, 5, 8, 64, 1024, 16384}) {
        std::set<long> seen;
        const int step = m > 4096 ? 7 : 1;  // sample the largest wheel
        for (int k = 0; k < m; k += step) {
            const double p = cipher_phase(k, m).phase;
            CHECK(p >= 0.0);
            CHECK(p < kTwoPi);
            seen.insert(std::lround(p * 1e12));
        }
        CHECK(seen.size() == static_cast<size_t>((m + step - 1) / step));
    }
}

TEST_CASE("bases overlap closed form") {
    CHECK(bases_overlap(0.0, 3.7) == doctest::Approx(1.0));
    CHECK(bases_overlap(kPi, 1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(bases_overlap(1.234, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(bases_overlap(1.0, -0.5), std::domain_error);

    // non-increasing in n and in |delta phi| on [0, 2pi]
    double prev = 1.1;
    for (double n : {0.1, 0.5, 1.0, 5.0, 50.0}) {
        const double v = bases_overlap(1.0, n);
        CHECK(v <= prev);
        prev = v;
    }
    prev = 1.1;
    for (int i = 0; i <= 40; ++i) {
        const double v = bases_overlap(kTwoPi * i / 40.0, 2.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("angle sigma and sigma coverage") {
    CHECK(angle_sigma(1.0) == doctest::Approx(1.0));
    CHECK(angle_sigma(100.0) == doctest::Approx(0.1));
    CHECK(angle_sigma(1e4) == doctest::Approx(0.01));
    CHECK_THROWS_AS(angle_sigma(0.0), std::domain_error);

    SystemParams p;
    p.num_bases = 1000;
    p.mean_photon_number = 1e4;
    CHECK(bases_within_sigma(p) == doctest::Approx(3.1831).epsilon(1e-4));

    p.num_bases = 32;
    p.mean_photon_number = 100.0;
    CHECK(bases_within_sigma(p) == doctest::Approx(32.0 / (10.0 * kPi)));

    // N_sigma = 1 exactly when M = pi * sqrt(n)
    p.num_bases = 100;
    p.mean_photon_number = std::pow(100.0 / kPi, 2);
    CHECK(bases_within_sigma(p) == doctest::Approx(1.0));
}

TEST_CASE("sigma coverage folds repetition into the photon number") {
    SystemParams with_reps;
    with_reps.num_bases = 64;
    with_reps.mean_photon_number = 7.5;
    with_reps.repetition = 9;

    SystemParams folded = with_reps;
    folded.mean_photon_number = 7.5 * 9.0;
    folded.repetition = 1;
    CHECK(bases_within_sigma(with_reps) == bases_within_sigma(folded));
}

TEST_CASE("parity priors match brute-force counting") {
    auto [even2, odd2] = apriori_parity_probs(2);
    CHECK(even2 == doctest::Approx(0.5));
    CHECK(odd2 == doctest::Approx(0.5));

    auto [even3, odd3] = apriori_parity_probs(3);
    CHECK(even3 == doctest::Approx(2.0 / 3.0));
    CHECK(odd3 == doctest::Approx(1.0 / 3.0));

    auto [even1, odd1] = apriori_parity_probs(1);
    CHECK(even1 == doctest::Approx(1.0));
    CHECK(odd1 == doctest::Approx(0.0));

    for (int m = 1; m <= 1000; ++m) {
        int even_count = 0;
        for (int k = 0; k < m; ++k)
            if (k % 2 == 0) ++even_count;
        auto [pe, po] = apriori_parity_probs(m);
        CHECK(pe == doctest::Approx(static_cast<double>(even_count) / m).epsilon(1e-14));
        CHECK(pe + po == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("phase measurement bounds") {
    CHECK(heisenberg_min_bases(100.0) == 18);
    CHECK(heisenberg_min_bases(1.0 / kPi) == 2);
    CHECK(phase_indistinguishable(100.0, 32));
    CHECK_FALSE(phase_indistinguishable(100.0, 17));

    const auto lim = phase_shift_limits(100.0, 32);
    CHECK(lim.sql == doctest::Approx(0.1));
    CHECK(lim.squeezed == doctest::Approx(std::pow(100.0, -0.75)));
    CHECK(lim.heisenberg == doctest::Approx(0.32));
}

TEST_CASE("repetition scaling reproduces the speed-cost example") {
    const auto s = repetition_scaling(1000);
    CHECK(s.repetition == 20);
    CHECK(s.m_new == 4472);
    CHECK(s.k_new == 13);
    CHECK(10.0 * s.rate_scale == doctest::Approx(0.4).epsilon(0.1));
}

TEST_CASE("polarization overlap equals the great-circle closed form") {
    PoincarePoint a{1.1, 0.0};
    CHECK(polarization_overlap(a, a, 3.0) == doctest::Approx(1.0));

    PoincarePoint b{1.1, kPi};
    CHECK(polarization_overlap(a, b, 1.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    SplitMix64 rng(2024);
    for (double n : {0.1, 1.0, 10.0, 100.0}) {
        for (int trial = 0; trial < 100; ++trial) {
            const double theta = rng.next_double() * kPi;
            const double phi_a = rng.next_double() * kTwoPi;
            const double phi_b = rng.next_double() * kTwoPi;
            const double via_projection =
                polarization_overlap({theta, phi_a}, {theta, phi_b}, n);
            const double via_formula = bases_overlap(phi_b - phi_a, n);
            CHECK(std::fabs(via_projection - via_formula) <=
                  1e-12 * std::max(via_projection, via_formula));
        }
    }
}

TEST_CASE("wheel grid bit agrees with modulate") {
    for (int m : {1, 2, 4, 8, 32}) {
        for (int k = 0; k < m; ++k) {
            for (int bit : {0, 1}) {
                const double phase = protocol::modulate(bit, k, m);
                const long j = std::lround(phase * m / kPi) % (2 * m);
                CHECK(wheel_grid_bit(static_cast<int>(j), m) == bit);
            }
        }
    }
}
