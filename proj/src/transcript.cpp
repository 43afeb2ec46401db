#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mesokey/protocol.hpp"

namespace mesokey::protocol {

namespace {

std::string encode_bits(const BitSequence& bits) {
    return base64_encode(pack_bits(bits)) + "/" + std::to_string(bits.size());
}

BitSequence decode_bits(std::string_view field) {
    const auto slash = field.rfind('/');
    if (slash == std::string_view::npos)
        throw IoError("transcript: bit payload missing length suffix");
    std::size_t count = 0;
    const auto len = field.substr(slash + 1);
    if (std::from_chars(len.data(), len.data() + len.size(), count).ec != std::errc{})
        throw IoError("transcript: bad bit count '" + std::string(len) + "'");
    return unpack_bits(base64_decode(field.substr(0, slash)), count);
}

std::string encode_bases(const std::vector<int>& bases) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(bases.size() * 2);
    for (int b : bases) {
        bytes.push_back(static_cast<std::uint8_t>(b & 0xff));
        bytes.push_back(static_cast<std::uint8_t>((b >> 8) & 0xff));
    }
    return base64_encode(bytes) + "/" + std::to_string(bases.size());
}

std::vector<int> decode_bases(std::string_view field) {
    const auto slash = field.rfind('/');
    if (slash == std::string_view::npos)
        throw IoError("transcript: basis payload missing length suffix");
    std::size_t count = 0;
    const auto len = field.substr(slash + 1);
    if (std::from_chars(len.data(), len.data() + len.size(), count).ec != std::errc{})
        throw IoError("transcript: bad basis count");
    const auto bytes = base64_decode(field.substr(0, slash));
    if (bytes.size() < count * 2) throw IoError("transcript: basis payload truncated");
    std::vector<int> bases(count);
    for (std::size_t i = 0; i < count; ++i)
        bases[i] = bytes[2 * i] | (bytes[2 * i + 1] << 8);
    return bases;
}

std::string_view expect_field(std::string_view token, std::string_view key) {
    if (token.substr(0, key.size()) != key || token.size() <= key.size() ||
        token[key.size()] != '=')
        throw IoError("transcript: expected field '" + std::string(key) + "', got '" +
                      std::string(token) + "'");
    return token.substr(key.size() + 1);
}

}  // namespace

std::string transcript_to_text(const Transcript& transcript) {
    std::ostringstream out;
    out << "mesokey-transcript v1\n";
    for (const auto& cyc : transcript.cycles) {
        char ber[32];
        std::snprintf(ber, sizeof ber, "%.12g", cyc.receiver_ber);
        out << "cycle index=" << cyc.cycle_index << " sender="
            << role_letter(cyc.sender_role) << " ber=" << ber
            << " plain=" << encode_bits(cyc.plain_bits)
            << " bases=" << encode_bases(cyc.bases_used)
            << " recv=" << encode_bits(cyc.receiver_bits) << "\n";
    }
    out << "final a=" << encode_bits(transcript.final_key_a)
        << " b=" << encode_bits(transcript.final_key_b)
        << " diverged=" << (transcript.diverged ? 1 : 0)
        << " diverged_cycle=" << transcript.diverged_cycle << "\n";
    return out.str();
}

Transcript transcript_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "mesokey-transcript v1")
        throw IoError("transcript: missing or unknown header");

    Transcript transcript;
    bool saw_final = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag == "cycle") {
            CycleRecord cyc;
            std::string tok;
            fields >> tok;
            cyc.cycle_index = std::stoull(std::string(expect_field(tok, "index")));
            fields >> tok;
            cyc.sender_role = expect_field(tok, "sender") == "A" ? Role::A : Role::B;
            fields >> tok;
            cyc.receiver_ber = std::stod(std::string(expect_field(tok, "ber")));
            fields >> tok;
            cyc.plain_bits = decode_bits(expect_field(tok, "plain"));
            fields >> tok;
            cyc.bases_used = decode_bases(expect_field(tok, "bases"));
            fields >> tok;
            cyc.receiver_bits = decode_bits(expect_field(tok, "recv"));
            transcript.cycles.push_back(std::move(cyc));
        } else if (tag == "final") {
            std::string tok;
            fields >> tok;
            transcript.final_key_a = decode_bits(expect_field(tok, "a"));
            fields >> tok;
            transcript.final_key_b = decode_bits(expect_field(tok, "b"));
            fields >> tok;
            transcript.diverged = expect_field(tok, "diverged") == "1";
            fields >> tok;
            transcript.diverged_cycle =
                std::stoll(std::string(expect_field(tok, "diverged_cycle")));
            saw_final = true;
        } else {
            throw IoError("transcript: unknown record '" + tag + "'");
        }
    }
    if (!saw_final) throw IoError("transcript: missing final record");
    return transcript;
}

}  // namespace mesokey::protocol
