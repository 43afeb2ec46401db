#include <cmath>
#include <vector>

#include <doctest.h>

#include "mesokey/channel.hpp"
#include "mesokey/helstrom.hpp"
#include "mesokey/mry.hpp"
#include "mesokey/protocol.hpp"
#include "test_oracles.hpp"

using namespace mesokey;
using namespace mesokey::channel;

namespace {
SystemParams make_params(int m, double n, int r = 1) {
    SystemParams p;
    p.num_bases = m;
    p.mean_photon_number = n;
    p.repetition = r;
    return p;
}
}  // namespace

TEST_CASE("transmit adds gaussian phase noise with sigma = 1/sqrt(eta n)") {
    auto params = make_params(32, 100.0);
    SplitMix64 rng(1);
    const auto chan = GaussianPhaseChannel::for_eavesdropper(params);

    double sum = 0.0, sum2 = 0.0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) {
        const auto rec = transmit_one(1.0, chan, rng, i, 0);
        double eps = rec.measured_phase - 1.0;
        if (eps > kPi) eps -= kTwoPi;
        sum += eps;
        sum2 += eps * eps;
    }
    const double stddev = std::sqrt(sum2 / samples);
    CHECK(std::fabs(stddev - 0.1) < 3.0 * 0.1 / std::sqrt(2.0 * samples));
    CHECK(std::fabs(sum / samples) < 4.0 * 0.1 / std::sqrt(1.0 * samples));

    // the noiseless limit flag
    const auto exact = transmit_one(1.0, GaussianPhaseChannel::exact(), rng);
    CHECK(exact.measured_phase == 1.0);

    // transmittance rescales the receiver's effective photon number
    params.transmittance = 0.25;
    CHECK(GaussianPhaseChannel::for_receiver(params).sigma == doctest::Approx(0.2));
    CHECK(GaussianPhaseChannel::for_eavesdropper(params).sigma == doctest::Approx(0.1));
}

TEST_CASE("r-pulse averaging follows the sigma/sqrt(r) rule") {
    const auto params = make_params(32, 100.0, 4);
    SplitMix64 rng(2);
    const auto chan = GaussianPhaseChannel::for_eavesdropper(params);
    double sum2 = 0.0;
    const int samples = 50000;
    for (int i = 0; i < samples; ++i) {
        const auto recs = transmit(2.0, params, chan, rng, i);
        REQUIRE(recs.size() == 4);
        double eps = mean_measured_phase(recs) - 2.0;
        if (eps > kPi) eps -= kTwoPi;
        sum2 += eps * eps;
    }
    const double stddev = std::sqrt(sum2 / samples);
    CHECK(std::fabs(stddev - 0.05) < 3.0 * 0.05 / std::sqrt(2.0 * samples));
}

TEST_CASE("nearest-level snapping matches a brute-force grid scan") {
    SplitMix64 rng(3);
    for (int m : {1, 2, 5, 32}) {
        for (int trial = 0; trial < 400; ++trial) {
            MeasurementRecord rec;
            rec.measured_phase = rng.next_double() * kTwoPi;
            const int fast = eve_nearest_level(rec, m);
            double best = 1e9;
            int expect = -1;
            for (int j = 0; j < 2 * m; ++j) {
                const double d = mry::circular_distance(rec.measured_phase, kPi * j / m);
                if (d < best - 1e-15) {
                    best = d;
                    expect = mry::wheel_grid_bit(j, m);
                }
            }
            CHECK(fast == expect);
        }
    }
    // exactly on a grid point
    MeasurementRecord on_grid;
    on_grid.measured_phase = protocol::modulate(1, 3, 8);
    CHECK(eve_nearest_level(on_grid, 8) == 1);
    CHECK(eve_map_guess(on_grid, 8, 50.0) == 1);
}

TEST_CASE("single basis without ciphering is read almost perfectly") {
    const auto est = monte_carlo_ber(EveStrategy::Nearest, make_params(1, 100.0), 20000, 5);
    CHECK(est.ber == 0.0);  // gaussian tail beyond pi/2 at sigma = 0.1
}

TEST_CASE("strategies respect the quantum floor and their ordering") {
    const auto params = make_params(32, 100.0);
    const long trials = 200000;
    const auto nearest = monte_carlo_ber(EveStrategy::Nearest, params, trials, 11);
    const auto map = monte_carlo_ber(EveStrategy::Map, params, trials, 12);
    const double floor = helstrom::min_error_probability(params).pe;

    CHECK(nearest.ber >= floor - 3.0 * nearest.std_error);
    CHECK(map.ber >= floor - 3.0 * map.std_error);
    CHECK(map.ber <= nearest.ber + 3.0 * (map.std_error + nearest.std_error));

    // keyed readout crushes both whenever the noise covers adjacent bases
    const auto keyed = monte_carlo_ber(EveStrategy::Keyed, params, trials, 13);
    CHECK(keyed.ber == 0.0);
    CHECK(nearest.ber - keyed.ber > 5.0 * (nearest.std_error + keyed.std_error + 1e-12));
}

TEST_CASE("monte carlo estimates are deterministic in the seed") {
    const auto params = make_params(8, 4.0, 2);
    const auto one = monte_carlo_ber(EveStrategy::Map, params, 5000, 321);
    const auto two = monte_carlo_ber(EveStrategy::Map, params, 5000, 321);
    CHECK(one.ber == two.ber);
    CHECK(one.std_error == two.std_error);
    CHECK_THROWS_AS(monte_carlo_ber(EveStrategy::Map, params, 10, 1), std::domain_error);
    CHECK_THROWS_AS(strategy_from_name("quantum"), std::domain_error);
    CHECK(strategy_from_name("nearest") == EveStrategy::Nearest);
    CHECK(strategy_name(EveStrategy::Keyed) == "keyed");
}

TEST_CASE("repetition averaging matches the single-shot r*n run") {
    const auto repeated =
        monte_carlo_ber(EveStrategy::Nearest, make_params(16, 25.0, 4), 150000, 17);
    const auto folded =
        monte_carlo_ber(EveStrategy::Nearest, make_params(16, 100.0), 150000, 18);
    CHECK(std::fabs(repeated.ber - folded.ber) <
          3.0 * (repeated.std_error + folded.std_error));
}

TEST_CASE("keyed replay reproduces the receiver bit for bit") {
    const auto params = make_params(16, 9.0, 3);
    const auto chan = GaussianPhaseChannel::for_eavesdropper(params);
    SplitMix64 rng(55);

    std::vector<MeasurementRecord> records;
    std::vector<int> bases;
    BitSequence sent;
    BitSequence receiver_bits;
    for (int i = 0; i < 500; ++i) {
        const int bit = rng.next_bit();
        const int k = static_cast<int>(rng.next_below(params.num_bases));
        const auto pulses =
            transmit(protocol::modulate(bit, k, params.num_bases), params, chan, rng, i);
        const double phase = mean_measured_phase(pulses);
        receiver_bits.push_back(static_cast<std::uint8_t>(
            protocol::demodulate(phase, k, params.num_bases)));
        records.insert(records.end(), pulses.begin(), pulses.end());
        bases.push_back(k);
        sent.push_back(static_cast<std::uint8_t>(bit));
    }

    const auto eve = eve_keyed_replay(records, bases, params.num_bases,
                                      params.repetition);
    CHECK(eve == receiver_bits);

    // a uniformly wrong random key decodes to a coin flip
    SplitMix64 scramble(77);
    std::vector<int> wrong(bases);
    for (auto& k : wrong)
        k = static_cast<int>(scramble.next_below(params.num_bases));
    const auto scrambled = eve_keyed_replay(records, wrong, params.num_bases,
                                            params.repetition);
    CHECK(hamming_distance(scrambled, sent) > 0);

    CHECK(eve_keyed_replay({}, {}, params.num_bases, params.repetition).empty());
    CHECK_THROWS_AS(eve_keyed_replay(records, bases, params.num_bases, 2),
                    std::domain_error);
}

TEST_CASE("noisy XOR of a repeated bit") {
    const auto quiet = keyless_xor_mismatch(make_params(32, 1e9), 2000, 31);
    CHECK(quiet.rate == 0.0);  // effectively noiseless regime

    const auto noisy = keyless_xor_mismatch(make_params(32, 100.0), 50000, 32);
    CHECK(noisy.single_read_ber > 0.2);
    CHECK(std::fabs(noisy.rate - noisy.predicted_rate) <
          3.0 * (noisy.rate_std_error +
                 oracles::binom_se(noisy.single_read_ber, 2.0 * noisy.trials)));

    // giant wheel: single reads are coin flips, mismatch near 1/2
    const auto chaos = keyless_xor_mismatch(make_params(4096, 1.0), 50000, 33);
    CHECK(std::fabs(chaos.rate - 0.5) < 0.02);
}
