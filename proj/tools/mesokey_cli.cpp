// mesokey - command-line front end for the mesoscopic coherent-state
// key-distribution laboratory: eavesdropper error-probability curves,
// phase-measurement bounds, protocol/attack simulation, key distillation.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mesokey/bits.hpp"
#include "mesokey/channel.hpp"
#include "mesokey/helstrom.hpp"
#include "mesokey/mry.hpp"
#include "mesokey/params.hpp"
#include "mesokey/privacy.hpp"
#include "mesokey/protocol.hpp"

namespace {

using namespace mesokey;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

constexpr double kHeavyPhotonNumber = 1000.0;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void require_light_or_flag(double effective_n, bool allow_heavy) {
    if (effective_n >= kHeavyPhotonNumber && !allow_heavy)
        throw std::domain_error(
            "effective photon number " + fmt12(effective_n) +
            " needs a large eigensolve; pass --allow-heavy to acknowledge the runtime");
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out.good()) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t parse_seed(const std::string& text) {
    try {
        return std::stoull(text, nullptr, 0);  // accepts decimal and 0x hex
    } catch (const std::exception&) {
        throw std::domain_error("bad seed '" + text + "'");
    }
}

std::vector<int> m_range(int m_min, int m_max, int step) {
    if (m_min < 1 || step < 1 || m_max < m_min)
        throw std::domain_error("bad M range: need 1 <= m-min <= m-max, step >= 1");
    std::vector<int> ms;
    for (int m = m_min; m <= m_max; m += step) ms.push_back(m);
    return ms;
}

unsigned curve_threads(std::size_t points) {
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1u, std::min<unsigned>(hw ? hw : 1, points));
}

int cmd_pe_curve(double n, int m_min, int m_max, int step, const std::string& out_path,
                 bool allow_heavy, bool with_mi) {
    require_light_or_flag(n, allow_heavy);
    const auto ms = m_range(m_min, m_max, step);
    const auto curve = helstrom::pe_curve(ms, n, curve_threads(ms.size()));

    std::ostringstream csv;
    csv << (with_mi ? "M,n,pe,mi\n" : "M,n,pe\n");
    for (const auto& pt : curve) {
        csv << pt.num_bases << ',' << fmt12(pt.mean_photon_number) << ','
            << fmt12(pt.pe);
        if (with_mi) csv << ',' << fmt12(helstrom::eve_mutual_information(pt.pe));
        csv << '\n';
    }
    if (out_path == "-")
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return kExitOk;
}

int cmd_bounds(double n, int m, int r, bool with_pe, bool allow_heavy,
               const std::string& format) {
    const bool json_out = format == "json";
    SystemParams params;
    params.mean_photon_number = n;
    params.num_bases = m;
    params.repetition = r;
    params.validate();

    const double n_eff = params.eavesdropper_photon_number();
    const double sigma = mry::angle_sigma(n_eff);
    const double n_sigma = mry::bases_within_sigma(params);
    const auto limits = mry::phase_shift_limits(n_eff, m);
    const bool masked = mry::phase_indistinguishable(n_eff, m);
    const int m_min = mry::heisenberg_min_bases(n_eff);
    const auto scaling = mry::repetition_scaling(m);

    double pe = -1.0;
    if (with_pe) {
        require_light_or_flag(n_eff, allow_heavy);
        pe = helstrom::min_error_probability(params).pe;
    }

    if (json_out) {
        nlohmann::json j{
            {"n", n},
            {"m", m},
            {"repetition", r},
            {"effective_n", n_eff},
            {"sigma", sigma},
            {"n_sigma", n_sigma},
            {"delta_phi_sql", limits.sql},
            {"delta_phi_squeezed", limits.squeezed},
            {"delta_phi_heisenberg", limits.heisenberg},
            {"indistinguishable", masked},
            {"heisenberg_min_bases", m_min},
            {"scaling",
             {{"repetition", scaling.repetition},
              {"m_new", scaling.m_new},
              {"k_new", scaling.k_new},
              {"rate_scale", scaling.rate_scale}}},
        };
        if (with_pe) j["pe"] = pe;
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << "effective photon number  " << fmt12(n_eff) << "\n"
              << "angle sigma              " << fmt12(sigma) << "\n"
              << "bases within sigma       " << fmt12(n_sigma) << "\n"
              << "min shift SQL            " << fmt12(limits.sql) << "\n"
              << "min shift squeezed       " << fmt12(limits.squeezed) << "\n"
              << "min shift Heisenberg     " << fmt12(limits.heisenberg) << "\n"
              << "M > sqrt(pi N)           " << (masked ? "satisfied" : "violated")
              << " (min M = " << m_min << ")\n"
              << "repetition scaling       r=" << scaling.repetition
              << " -> M_new=" << scaling.m_new << " (K=" << scaling.k_new
              << ", rate x" << fmt12(scaling.rate_scale) << ", 10 GHz -> "
              << fmt12(10.0 * scaling.rate_scale) << " GHz)\n";
    if (with_pe) std::cout << "min error probability    " << fmt12(pe) << "\n";
    return kExitOk;
}

struct SimulateOptions {
    double n = 100.0;
    int m = 32;
    int r = 1;
    double eta = 1.0;
    int cycles = 10;
    std::size_t l0 = 1020;
    std::string k0_hex;
    std::string seed = "0xC0FFEE";
    std::string eve = "all";
    bool lfsr = false;
    bool reveal_key = false;
    bool allow_heavy = false;
    double distill_ratio = 0.5;
    int check_bits = 64;
    std::string transcript_path;
    std::string format = "text";
};

int cmd_simulate(const SimulateOptions& opt) {
    SystemParams params;
    params.mean_photon_number = opt.n;
    params.num_bases = opt.m;
    params.repetition = opt.r;
    params.transmittance = opt.eta;
    params.validate();
    if (opt.cycles < 1) throw std::domain_error("cycles must be >= 1");

    const std::uint64_t master = parse_seed(opt.seed);
    BitSequence k0 = opt.k0_hex.empty()
                         ? [&] {
                               SplitMix64 rng(derive_seed(master, 0));
                               return random_bits(rng, opt.l0);
                           }()
                         : bits_from_hex(opt.k0_hex);
    if (k0.size() != opt.l0)
        throw std::domain_error("K0 length " + std::to_string(k0.size()) +
                                " does not match --l0 " + std::to_string(opt.l0));

    const auto mode = opt.lfsr ? protocol::CipherMode::Lfsr : protocol::CipherMode::Block;
    const auto bob_channel = channel::GaussianPhaseChannel::for_receiver(params);
    const auto transcript =
        protocol::run_protocol(opt.cycles, params, bob_channel, k0,
                               derive_seed(master, 1), derive_seed(master, 2),
                               derive_seed(master, 3), mode);

    // Eavesdropper records of the same pulse stream, sampled at the source.
    // All requested strategies read the same noise realizations.
    std::vector<channel::EveStrategy> strategies;
    if (opt.eve == "all") {
        strategies = {channel::EveStrategy::Nearest, channel::EveStrategy::Map};
        if (opt.reveal_key) strategies.push_back(channel::EveStrategy::Keyed);
    } else {
        strategies = {channel::strategy_from_name(opt.eve)};
    }
    for (auto s : strategies)
        if (s == channel::EveStrategy::Keyed && !opt.reveal_key)
            throw std::domain_error(
                "--eve keyed needs --reveal-key (the key is only available to her "
                "after the fact)");

    const auto eve_channel = channel::GaussianPhaseChannel::for_eavesdropper(params);
    SplitMix64 eve_rng(derive_seed(master, 4));
    std::vector<long> eve_errors(strategies.size(), 0);
    long eve_bits = 0;
    double bob_ber_sum = 0.0;
    for (const auto& cyc : transcript.cycles) {
        bob_ber_sum += cyc.receiver_ber;
        for (std::size_t i = 0; i < cyc.plain_bits.size(); ++i) {
            const int k = opt.lfsr ? cyc.bases_used[i]
                                   : cyc.bases_used[i / key_bits_per_basis(opt.m)];
            const double phase = protocol::modulate(cyc.plain_bits[i], k, opt.m);
            const auto pulses =
                channel::transmit(phase, params, eve_channel, eve_rng,
                                  static_cast<std::int64_t>(i));
            channel::MeasurementRecord pooled = pulses[0];
            pooled.measured_phase = channel::mean_measured_phase(pulses);
            for (std::size_t s = 0; s < strategies.size(); ++s) {
                int guess = 0;
                switch (strategies[s]) {
                    case channel::EveStrategy::Nearest:
                        guess = channel::eve_nearest_level(pooled, opt.m);
                        break;
                    case channel::EveStrategy::Map:
                        guess = channel::eve_map_guess(
                            pooled, opt.m, params.eavesdropper_photon_number());
                        break;
                    case channel::EveStrategy::Keyed:
                        guess =
                            protocol::demodulate(pooled.measured_phase, k, opt.m);
                        break;
                }
                if (guess != cyc.plain_bits[i]) ++eve_errors[s];
            }
            ++eve_bits;
        }
    }
    std::vector<double> eve_ber(strategies.size(), 0.0);
    for (std::size_t s = 0; s < strategies.size(); ++s)
        eve_ber[s] = eve_bits ? static_cast<double>(eve_errors[s]) / eve_bits : 0.0;
    const double bob_ber =
        transcript.cycles.empty() ? 0.0 : bob_ber_sum / transcript.cycles.size();

    double helstrom_floor = -1.0;
    if (params.eavesdropper_photon_number() < kHeavyPhotonNumber || opt.allow_heavy)
        helstrom_floor = helstrom::min_error_probability(params).pe;

    // Step 7: verification digest plus privacy amplification.
    const auto recon = protocol::reconcile_and_verify(
        transcript.final_key_a, transcript.final_key_b, opt.check_bits,
        derive_seed(master, 5));
    const std::size_t amplified_len =
        static_cast<std::size_t>(opt.distill_ratio * transcript.final_key_a.size());
    BitSequence distilled;
    if (recon.verified && !transcript.diverged)
        distilled = protocol::privacy_amplify(transcript.final_key_a, amplified_len,
                                              derive_seed(master, 6));

    if (!opt.transcript_path.empty())
        write_file(opt.transcript_path, protocol::transcript_to_text(transcript));

    const double eve_reference =
        helstrom_floor >= 0.0
            ? helstrom_floor
            : *std::min_element(eve_ber.begin(), eve_ber.end());
    const double balance = helstrom::information_balance(bob_ber, eve_reference,
                                                         static_cast<double>(opt.l0));

    if (opt.format == "json") {
        nlohmann::json eve_json = nlohmann::json::object();
        for (std::size_t s = 0; s < strategies.size(); ++s)
            eve_json[std::string(channel::strategy_name(strategies[s]))] = eve_ber[s];
        nlohmann::json j{
            {"cycles_run", transcript.cycles.size()},
            {"diverged", transcript.diverged},
            {"diverged_cycle", transcript.diverged_cycle},
            {"keys_match", transcript.final_key_a == transcript.final_key_b},
            {"verified", recon.verified},
            {"verification_degenerate", recon.degenerate},
            {"bob_ber", bob_ber},
            {"eve_ber", eve_json},
            {"helstrom_floor", helstrom_floor},
            {"information_balance_bits", balance},
            {"distilled_bits", distilled.size()},
        };
        nlohmann::json per_cycle = nlohmann::json::array();
        for (const auto& cyc : transcript.cycles)
            per_cycle.push_back({{"index", cyc.cycle_index},
                                 {"sender", std::string(1, role_letter(cyc.sender_role))},
                                 {"receiver_ber", cyc.receiver_ber}});
        j["per_cycle"] = per_cycle;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& cyc : transcript.cycles)
            std::cout << "cycle " << cyc.cycle_index << " sender "
                      << role_letter(cyc.sender_role) << " receiver-ber "
                      << fmt12(cyc.receiver_ber) << "\n";
        std::cout << "keys-match " << (transcript.final_key_a == transcript.final_key_b)
                  << "\nverified " << recon.verified
                  << (recon.degenerate ? " (degenerate)" : "") << "\nbob-ber "
                  << fmt12(bob_ber) << "\n";
        for (std::size_t s = 0; s < strategies.size(); ++s)
            std::cout << "eve-" << channel::strategy_name(strategies[s]) << "-ber "
                      << fmt12(eve_ber[s]) << "\n";
        std::cout << "helstrom-floor "
                  << (helstrom_floor >= 0.0 ? fmt12(helstrom_floor) : "skipped(heavy)")
                  << "\ninformation-balance " << fmt12(balance) << "\ndistilled-bits "
                  << distilled.size() << "\n";
    }

    if (transcript.diverged || !recon.verified) return kExitValidation;
    return kExitOk;
}

int cmd_distill(const std::string& in_path, double ratio, const std::string& seed_text,
                const std::string& out_path, int check_bits,
                const std::string& expect_digest) {
    if (!(ratio > 0.0) || ratio > 1.0)
        throw std::domain_error("ratio must lie in (0, 1]");
    if (check_bits < 0 || check_bits % 4 != 0)
        throw std::domain_error("check-bits must be a non-negative multiple of 4");
    const auto key = bits_from_hex(read_file(in_path));
    if (key.empty()) throw std::domain_error("input key file is empty");

    const std::uint64_t seed = parse_seed(seed_text);
    const auto digest = protocol::toeplitz_hash(
        key, static_cast<std::size_t>(check_bits > 0 ? check_bits : 0), seed);
    const std::string digest_hex =
        digest.empty() ? std::string("(none)") : bits_to_hex(digest);
    std::cout << "digest " << digest_hex << "\n";

    if (!expect_digest.empty() && digest_hex != expect_digest) {
        std::cout << "digest-mismatch expected " << expect_digest << "\n";
        return kExitValidation;
    }

    // output length rounded down to whole hex digits
    const std::size_t out_bits =
        static_cast<std::size_t>(ratio * key.size()) / 4 * 4;
    const auto amplified = protocol::privacy_amplify(key, out_bits, derive_seed(seed, 1));
    write_file(out_path, bits_to_hex(amplified) + "\n");
    std::cout << "amplified-bits " << amplified.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "mesokey: mesoscopic coherent-state key-distribution laboratory.\n"
        "Computes the eavesdropper's minimum error probability over the M-ry\n"
        "ciphering wheel, checks phase-measurement bounds, and simulates the\n"
        "chained key-exchange protocol under shot-noise channels."};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "flat key=value config file (keys like pe-curve.n=100); "
                   "flags override");

    // pe-curve
    double n = 0.0;  // must come from a flag or config file
    int m_min = 1, m_max = 64, step = 1;
    std::string out_path = "-";
    bool allow_heavy = false;
    auto* pe = app.add_subcommand("pe-curve",
                                  "CSV of the minimum error probability vs M");
    pe->fallthrough();
    pe->configurable();
    pe->add_option("--n", n, "mean photon number per bit");
    pe->add_option("--m-min", m_min, "first M");
    pe->add_option("--m-max", m_max, "last M");
    pe->add_option("--step", step, "M increment");
    pe->add_option("--out", out_path, "output path, - for stdout");
    pe->add_flag("--allow-heavy", allow_heavy, "permit large eigensolves (n >= 1000)");

    // mi-curve
    auto* mi = app.add_subcommand("mi-curve",
                                  "CSV of eavesdropper mutual information vs M");
    mi->fallthrough();
    mi->configurable();
    mi->add_option("--n", n, "mean photon number per bit");
    mi->add_option("--m-min", m_min, "first M");
    mi->add_option("--m-max", m_max, "last M");
    mi->add_option("--step", step, "M increment");
    mi->add_option("--out", out_path, "output path, - for stdout");
    mi->add_flag("--allow-heavy", allow_heavy, "permit large eigensolves (n >= 1000)");

    // bounds
    int bounds_m = 32, bounds_r = 1;
    bool with_pe = false;
    std::string bounds_format = "text";
    auto* bounds = app.add_subcommand("bounds",
                                      "sigma coverage and phase-measurement limits");
    bounds->fallthrough();
    bounds->configurable();
    bounds->add_option("--n", n, "mean photon number per bit");
    bounds->add_option("--m", bounds_m, "number of ciphering bases")->required();
    bounds->add_option("--r", bounds_r, "cipher/bit repetition count");
    bounds->add_flag("--with-pe", with_pe, "also compute the Helstrom floor");
    bounds->add_flag("--allow-heavy", allow_heavy, "permit large eigensolves");
    bounds->add_option("--format", bounds_format, "report format: text|json");

    // simulate
    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate",
                                        "run the chained protocol with an eavesdropper");
    simulate->fallthrough();
    simulate->configurable();
    simulate->add_option("--n", sim.n, "mean photon number per bit");
    simulate->add_option("--m", sim.m, "number of ciphering bases (power of two)");
    simulate->add_option("--r", sim.r, "pulses per bit");
    simulate->add_option("--eta", sim.eta, "receiver transmittance in (0,1]");
    simulate->add_option("--cycles", sim.cycles, "protocol cycles to run");
    simulate->add_option("--l0", sim.l0, "sequence length per cycle");
    simulate->add_option("--k0", sim.k0_hex, "starting key as hex (length l0)");
    simulate->add_option("--seed", sim.seed, "master seed (decimal or 0x hex)");
    simulate->add_option("--eve", sim.eve,
                     "eavesdropper strategy: nearest|map|keyed|all");
    simulate->add_flag("--lfsr", sim.lfsr, "per-bit LFSR ciphering variant");
    simulate->add_flag("--reveal-key", sim.reveal_key,
                       "let the keyed strategy replay with the true bases");
    simulate->add_flag("--allow-heavy", sim.allow_heavy, "permit large eigensolves");
    simulate->add_option("--distill-ratio", sim.distill_ratio,
                         "privacy amplification compression ratio");
    simulate->add_option("--check-bits", sim.check_bits, "verification digest bits");
    simulate->add_option("--transcript", sim.transcript_path,
                         "write the line-delimited transcript here");
    simulate->add_option("--format", sim.format, "summary format: text|json");

    // distill
    std::string distill_in, distill_out = "distilled.hex", distill_seed = "0xD15711",
                expect_digest;
    double ratio = 0.5;
    int check_bits = 64;
    auto* distill = app.add_subcommand("distill",
                                       "verification digest + privacy amplification");
    distill->fallthrough();
    distill->configurable();
    distill->add_option("--in", distill_in, "input key file (hex)")->required();
    distill->add_option("--ratio", ratio, "output/input length ratio");
    distill->add_option("--hash-seed", distill_seed, "hash seed (decimal or 0x hex)");
    distill->add_option("--out", distill_out, "output key file (hex)");
    distill->add_option("--check-bits", check_bits, "digest length in bits");
    distill->add_option("--expect-digest", expect_digest,
                        "abort when the digest differs from this hex value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (pe->parsed())
            return cmd_pe_curve(n, m_min, m_max, step, out_path, allow_heavy, false);
        if (mi->parsed())
            return cmd_pe_curve(n, m_min, m_max, step, out_path, allow_heavy, true);
        if (bounds->parsed())
            return cmd_bounds(n, bounds_m, bounds_r, with_pe, allow_heavy,
                              bounds_format);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (distill->parsed())
            return cmd_distill(distill_in, ratio, distill_seed, distill_out, check_bits,
                               expect_digest);
    } catch (const mesokey::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mesokey::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
