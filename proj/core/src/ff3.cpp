#include "pcscrypt/ff3.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

namespace pcscrypt::fpe {

namespace {

constexpr std::size_t kMaxBlock = 192;  // 2 * floor(log_2(2^96))
constexpr int kRounds = 8;

uint128 pow2_96() { return uint128{1} << 96; }

/// NUM_radix(REV(half)): digits read least-significant first.
uint128 num_reversed(std::span<const std::uint16_t> half, std::uint32_t radix) {
    uint128 acc = 0;
    for (std::size_t j = half.size(); j-- > 0;) acc = acc * radix + half[j];
    return acc;
}

/// REV(STR^m_radix(value)) written into `out` (least-significant digit first).
void store_reversed(uint128 value, std::uint32_t radix, std::span<std::uint16_t> out) {
    for (auto& d : out) {
        const auto q = value / radix;
        d = static_cast<std::uint16_t>(value - q * radix);
        value = q;
    }
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c >= 'a' && c <= 'f') return 10 + (c - 'a');
    return -1;
}

}  // namespace

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
    std::vector<std::uint8_t> out;
    int pending = -1;
    for (char c : hex) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const int v = hex_value(c);
        if (v < 0) throw FormatError("invalid hex digit '" + std::string(1, c) + "'");
        if (pending < 0) {
            pending = v;
        } else {
            out.push_back(static_cast<std::uint8_t>((pending << 4) | v));
            pending = -1;
        }
    }
    if (pending >= 0) throw FormatError("odd number of hex digits");
    return out;
}

CipherKey CipherKey::from_hex(std::string_view key_hex, std::string_view tweak_hex) {
    const auto key = parse_hex(key_hex);
    const auto tweak = parse_hex(tweak_hex);
    if (key.size() != 16) throw FormatError("key must be 128 bits (32 hex digits)");
    if (tweak.size() != 8) throw FormatError("tweak must be 64 bits (16 hex digits)");
    CipherKey out;
    std::copy(key.begin(), key.end(), out.key.begin());
    std::copy(tweak.begin(), tweak.end(), out.tweak.begin());
    return out;
}

std::size_t max_half_length(std::uint32_t radix) noexcept {
    if (radix < 2) return 0;
    std::size_t k = 0;
    uint128 p = 1;
    while (p * radix <= pow2_96()) {
        p *= radix;
        ++k;
    }
    return k;
}

Ff3Params Ff3Params::for_radix(std::uint32_t radix) {
    Ff3Params p;
    p.radix = radix;
    p.minlen = 2;
    if (radix >= kMinRadix) {
        while (checked_pow(radix, p.minlen) != 0 && checked_pow(radix, p.minlen) < 100) ++p.minlen;
    }
    p.maxlen = 2 * max_half_length(radix);
    return p;
}

ValidationReport validate_params(const Ff3Params& p) {
    ValidationReport report;
    const bool radix_ok = p.radix >= kMinRadix && p.radix <= kMaxRadix;
    if (!radix_ok) {
        report.violations.push_back("radix " + std::to_string(p.radix) + " outside [2, 65536]");
    }
    if (p.minlen < 2) {
        report.violations.push_back("minlen " + std::to_string(p.minlen) + " < 2");
    }
    if (radix_ok) {
        const uint128 power = checked_pow(p.radix, p.minlen);
        if (power != 0 && power < 100) {
            report.violations.push_back("radix^minlen = " + to_decimal(power) + " < 100");
        }
    }
    if (p.minlen > p.maxlen) {
        report.violations.push_back("minlen " + std::to_string(p.minlen) + " > maxlen " + std::to_string(p.maxlen));
    }
    if (radix_ok) {
        const std::size_t bound = 2 * max_half_length(p.radix);
        if (p.maxlen > bound) {
            report.violations.push_back("maxlen " + std::to_string(p.maxlen) + " > 2*floor(log_radix(2^96)) = " +
                                        std::to_string(bound));
        }
    }
    return report;
}

namespace {

std::vector<std::uint8_t> reversed_key(std::span<const std::uint8_t> key) { return {key.rbegin(), key.rend()}; }

const Ff3Params& checked(const Ff3Params& params) {
    if (auto report = validate_params(params); !report.ok()) {
        throw ParameterError("invalid FF3 parameters: " + report.summary());
    }
    return params;
}

}  // namespace

Ff3Cipher::Ff3Cipher(std::span<const std::uint8_t> key, const Ff3Params& params)
    : aes_(reversed_key(key)), params_(checked(params)) {}

uint128 Ff3Cipher::round_value(int round, const Tweak& tweak, std::span<const std::uint16_t> half) const {
    // P = (W xor [i]^4) || [NUM_radix(REV(half))]^12, and the AES input is REVB(P):
    // the 12-byte number little-endian first, then W reversed.
    const bool even = (round % 2) == 0;
    const std::uint8_t* w = even ? tweak.data() + 4 : tweak.data();
    AesBlock x{};
    uint128 n = num_reversed(half, params_.radix);
    for (int k = 0; k < 12; ++k) {
        x[k] = static_cast<std::uint8_t>(n);
        n >>= 8;
    }
    x[12] = static_cast<std::uint8_t>(w[3] ^ static_cast<std::uint8_t>(round));
    x[13] = w[2];
    x[14] = w[1];
    x[15] = w[0];

    AesBlock y;
    aes_.encrypt_block(x, y);
    // S = REVB(y), so NUM(S) reads y least-significant byte first.
    uint128 value = 0;
    for (int k = 15; k >= 0; --k) value = (value << 8) | y[k];
    return value;
}

void Ff3Cipher::encrypt_digits(std::span<const std::uint16_t> in, std::span<std::uint16_t> out,
                               const Tweak& tweak) const {
    const std::size_t n = in.size();
    const std::size_t u = (n + 1) / 2;
    const std::size_t v = n - u;
    const std::uint32_t radix = params_.radix;
    const uint128 mod_u = checked_pow(radix, u);
    const uint128 mod_v = checked_pow(radix, v);

    std::array<std::uint16_t, kMaxBlock> a_buf{}, b_buf{}, c_buf{};
    std::copy_n(in.begin(), u, a_buf.begin());
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(u), v, b_buf.begin());
    std::size_t a_len = u, b_len = v;
    auto* a = a_buf.data();
    auto* b = b_buf.data();
    auto* c = c_buf.data();

    for (int i = 0; i < kRounds; ++i) {
        const bool even = (i % 2) == 0;
        const std::size_t m = even ? u : v;
        const uint128 modulus = even ? mod_u : mod_v;
        const uint128 y = round_value(i, tweak, {b, b_len}) % modulus;
        const uint128 sum = (num_reversed({a, a_len}, radix) + y) % modulus;
        store_reversed(sum, radix, {c, m});
        // A <- B, B <- C
        std::swap(a, b);
        a_len = b_len;
        std::swap(b, c);
        b_len = m;
    }
    std::copy_n(a, a_len, out.begin());
    std::copy_n(b, b_len, out.begin() + static_cast<std::ptrdiff_t>(a_len));
}

void Ff3Cipher::decrypt_digits(std::span<const std::uint16_t> in, std::span<std::uint16_t> out,
                               const Tweak& tweak) const {
    const std::size_t n = in.size();
    const std::size_t u = (n + 1) / 2;
    const std::size_t v = n - u;
    const std::uint32_t radix = params_.radix;
    const uint128 mod_u = checked_pow(radix, u);
    const uint128 mod_v = checked_pow(radix, v);

    std::array<std::uint16_t, kMaxBlock> a_buf{}, b_buf{}, c_buf{};
    std::copy_n(in.begin(), u, a_buf.begin());
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(u), v, b_buf.begin());
    std::size_t a_len = u, b_len = v;
    auto* a = a_buf.data();
    auto* b = b_buf.data();
    auto* c = c_buf.data();

    for (int i = kRounds - 1; i >= 0; --i) {
        const bool even = (i % 2) == 0;
        const std::size_t m = even ? u : v;
        const uint128 modulus = even ? mod_u : mod_v;
        const uint128 y = round_value(i, tweak, {a, a_len}) % modulus;
        const uint128 diff = (num_reversed({b, b_len}, radix) + modulus - y) % modulus;
        store_reversed(diff, radix, {c, m});
        // B <- A, A <- C
        std::swap(b, a);
        b_len = a_len;
        std::swap(a, c);
        a_len = m;
    }
    std::copy_n(a, a_len, out.begin());
    std::copy_n(b, b_len, out.begin() + static_cast<std::ptrdiff_t>(a_len));
}

void Ff3Cipher::check_input(const NumeralString& x) const {
    if (x.radix() != params_.radix) {
        throw MalformedInputError("numeral radix " + std::to_string(x.radix()) + " does not match cipher radix " +
                                  std::to_string(params_.radix));
    }
    if (x.size() < params_.minlen || x.size() > params_.maxlen) {
        throw ParameterError("block length " + std::to_string(x.size()) + " outside [" +
                             std::to_string(params_.minlen) + ", " + std::to_string(params_.maxlen) + "]");
    }
}

NumeralString Ff3Cipher::encrypt(const NumeralString& x, const Tweak& tweak) const {
    check_input(x);
    std::vector<std::uint16_t> out(x.size());
    encrypt_digits(x.digits(), out, tweak);
    return NumeralString(std::move(out), params_.radix);
}

NumeralString Ff3Cipher::decrypt(const NumeralString& x, const Tweak& tweak) const {
    check_input(x);
    std::vector<std::uint16_t> out(x.size());
    decrypt_digits(x.digits(), out, tweak);
    return NumeralString(std::move(out), params_.radix);
}

NumeralString ff3_encrypt(const CipherKey& key, const NumeralString& x, const Ff3Params& params) {
    return Ff3Cipher(key, params).encrypt(x, key.tweak);
}

NumeralString ff3_decrypt(const CipherKey& key, const NumeralString& x, const Ff3Params& params) {
    return Ff3Cipher(key, params).decrypt(x, key.tweak);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

std::string bracketed(std::string_view s, std::size_t line_no) {
    const auto open = s.find('<');
    const auto close = s.rfind('>');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw FormatError("line " + std::to_string(line_no) + ": expected <numeral>");
    }
    return std::string(s.substr(open + 1, close - open - 1));
}

}  // namespace

std::vector<Ff3Vector> read_ff3_vectors(std::istream& in) {
    std::vector<Ff3Vector> out;
    Ff3Vector current;
    bool have_key = false, have_pt = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        if (starts_with_ci(s, "Sample")) {
            current = Ff3Vector{};
            current.label = std::string(s);
            have_key = have_pt = false;
        } else if (starts_with_ci(s, "FF3")) {
            current.label += current.label.empty() ? std::string(s) : " " + std::string(s);
        } else if (starts_with_ci(s, "Key is")) {
            current.key = parse_hex(s.substr(6));
            have_key = true;
        } else if (starts_with_ci(s, "Radix")) {
            const auto eq = s.find('=');
            if (eq == std::string_view::npos) throw FormatError("line " + std::to_string(line_no) + ": Radix = N");
            current.radix = static_cast<std::uint32_t>(parse_uint128(trim(s.substr(eq + 1))));
        } else if (starts_with_ci(s, "Tweak is")) {
            const auto bytes = parse_hex(s.substr(8));
            if (bytes.size() != 8) throw FormatError("line " + std::to_string(line_no) + ": tweak must be 8 bytes");
            std::copy(bytes.begin(), bytes.end(), current.tweak.begin());
        } else if (starts_with_ci(s, "PT is")) {
            current.plaintext = bracketed(s, line_no);
            have_pt = true;
        } else if (starts_with_ci(s, "CT is")) {
            current.ciphertext = bracketed(s, line_no);
            if (!have_key || !have_pt) {
                throw FormatError("line " + std::to_string(line_no) + ": CT before key and PT");
            }
            out.push_back(current);
            have_pt = false;
        } else {
            throw FormatError("line " + std::to_string(line_no) + ": unrecognised '" + std::string(s) + "'");
        }
    }
    return out;
}

VectorOutcome check_vector(const Ff3Vector& v) {
    VectorOutcome outcome;
    outcome.label = v.label;
    const Ff3Cipher cipher(v.key, Ff3Params::for_radix(v.radix));
    const auto pt = NumeralString::parse(v.plaintext, v.radix);
    const auto ct = NumeralString::parse(v.ciphertext, v.radix);
    const auto got = cipher.encrypt(pt, v.tweak);
    outcome.got = got.to_string();
    outcome.encrypt_ok = got == ct;
    outcome.decrypt_ok = cipher.decrypt(ct, v.tweak) == pt;
    return outcome;
}

}  // namespace pcscrypt::fpe
