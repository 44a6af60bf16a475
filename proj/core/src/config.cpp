#include "pcscrypt/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pcscrypt/error.hpp"

namespace pcscrypt::config {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_unsigned(std::string_view value, const std::string& where) {
    T v{};
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw ConfigError(where + ": '" + std::string(value) + "' is not an unsigned integer");
    }
    return v;
}

}  // namespace

ctr::StreamCipherConfig parse_config(std::istream& in) {
    ctr::StreamCipherConfig cfg;
    std::string key_hex;
    std::string tweak_hex = "0000000000000000";
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const std::string where = "config line " + std::to_string(number);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
        const auto key = trim(body.substr(0, eq));
        const auto value = trim(body.substr(eq + 1));
        if (!seen.emplace(key).second) throw ConfigError(where + ": duplicate key '" + std::string(key) + "'");

        if (key == "key_hex") {
            key_hex = value;
        } else if (key == "tweak_hex") {
            tweak_hex = value;
        } else if (key == "radix") {
            cfg.radix = parse_unsigned<std::uint32_t>(value, where);
        } else if (key == "blocksize") {
            cfg.blocksize = parse_unsigned<std::size_t>(value, where);
        } else if (key == "init_counter") {
            try {
                cfg.init_counter = fpe::parse_uint128(value);
            } catch (const Error& e) {
                throw ConfigError(where + ": " + e.what());
            }
        } else if (key == "bits_per_symbol") {
            cfg.bits_per_symbol = parse_unsigned<unsigned>(value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (key_hex.empty()) throw ConfigError("config is missing key_hex");
    try {
        cfg.key = fpe::CipherKey::from_hex(key_hex, tweak_hex);
    } catch (const Error& e) {
        throw ConfigError(std::string("config key: ") + e.what());
    }
    return cfg;
}

ctr::StreamCipherConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (const auto b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0xF];
    }
    return out;
}

std::string format_config(const ctr::StreamCipherConfig& cfg) {
    std::ostringstream out;
    out << "key_hex = " << to_hex(cfg.key.key) << '\n'
        << "tweak_hex = " << to_hex(cfg.key.tweak) << '\n'
        << "radix = " << cfg.radix << '\n'
        << "blocksize = " << cfg.blocksize << '\n'
        << "init_counter = " << fpe::to_decimal(cfg.init_counter) << '\n'
        << "bits_per_symbol = " << cfg.bits_per_symbol << '\n';
    return out.str();
}

}  // namespace pcscrypt::config
