#include "pcscrypt/numeral.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "pcscrypt/error.hpp"

namespace pcscrypt::fpe {

namespace {

void check_radix(std::uint32_t radix) {
    if (radix < kMinRadix || radix > kMaxRadix) {
        throw ParameterError("radix " + std::to_string(radix) + " outside [2, 65536]");
    }
}

constexpr uint128 kMax128 = ~uint128{0};

}  // namespace

NumeralString::NumeralString(std::vector<std::uint16_t> digits, std::uint32_t radix)
    : digits_(std::move(digits)), radix_(radix) {
    check_radix(radix);
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (digits_[i] >= radix) {
            throw MalformedInputError("digit " + std::to_string(digits_[i]) + " at position " + std::to_string(i) +
                                      " is not below radix " + std::to_string(radix));
        }
    }
}

NumeralString NumeralString::zeros(std::size_t length, std::uint32_t radix) {
    return NumeralString(std::vector<std::uint16_t>(length, 0), radix);
}

NumeralString NumeralString::parse(std::string_view text, std::uint32_t radix) {
    if (radix > 36) throw ParameterError("text numerals only cover radix <= 36");
    std::vector<std::uint16_t> digits;
    digits.reserve(text.size());
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(ch)));
        unsigned d = 0;
        if (c >= '0' && c <= '9') {
            d = c - '0';
        } else if (c >= 'a' && c <= 'z') {
            d = 10u + (c - 'a');
        } else {
            throw FormatError(std::string("unexpected numeral character '") + ch + "'");
        }
        digits.push_back(static_cast<std::uint16_t>(d));
    }
    return NumeralString(std::move(digits), radix);
}

std::string NumeralString::to_string() const {
    if (radix_ > 36) throw ParameterError("text numerals only cover radix <= 36");
    static constexpr char kAlphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out;
    out.reserve(digits_.size());
    for (auto d : digits_) out += kAlphabet[d];
    return out;
}

uint128 num(std::span<const std::uint16_t> digits, std::uint32_t radix) {
    uint128 acc = 0;
    for (auto d : digits) {
        if (acc > (kMax128 - d) / radix) throw RangeError("numeral value exceeds 128 bits");
        acc = acc * radix + d;
    }
    return acc;
}

uint128 num(const NumeralString& x) { return num(x.digits(), x.radix()); }

uint128 checked_pow(std::uint32_t radix, std::size_t exponent) noexcept {
    uint128 p = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (p > kMax128 / radix) return 0;
        p *= radix;
    }
    return p;
}

NumeralString str(uint128 value, std::size_t length, std::uint32_t radix) {
    check_radix(radix);
    const uint128 bound = checked_pow(radix, length);
    if (bound != 0 && value >= bound) {
        throw RangeError(to_decimal(value) + " does not fit in " + std::to_string(length) + " digits of radix " +
                         std::to_string(radix));
    }
    std::vector<std::uint16_t> digits(length, 0);
    for (std::size_t i = length; i-- > 0 && value != 0;) {
        digits[i] = static_cast<std::uint16_t>(value % radix);
        value /= radix;
    }
    return NumeralString(std::move(digits), radix);
}

NumeralString rev(const NumeralString& x) {
    std::vector<std::uint16_t> digits(x.digits().rbegin(), x.digits().rend());
    return NumeralString(std::move(digits), x.radix());
}

std::vector<std::uint8_t> revb(std::span<const std::uint8_t> bytes) {
    return {bytes.rbegin(), bytes.rend()};
}

std::string to_decimal(uint128 value) {
    if (value == 0) return "0";
    std::string out;
    while (value != 0) {
        out += static_cast<char>('0' + static_cast<int>(value % 10));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

uint128 parse_uint128(std::string_view text) {
    auto fail = [&] { return FormatError("not an unsigned integer: '" + std::string(text) + "'"); };
    unsigned base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    }
    if (text.empty()) throw fail();
    uint128 acc = 0;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(ch)));
        unsigned d = 0;
        if (c >= '0' && c <= '9') {
            d = c - '0';
        } else if (base == 16 && c >= 'a' && c <= 'f') {
            d = 10u + (c - 'a');
        } else {
            throw fail();
        }
        if (acc > (kMax128 - d) / base) throw fail();
        acc = acc * base + d;
    }
    return acc;
}

}  // namespace pcscrypt::fpe
