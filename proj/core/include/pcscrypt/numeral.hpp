#pragma once

// Numeral strings and the NUM / STR / REV / REVB conversions used by FF3.
// Digits are stored most-significant first.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcscrypt::fpe {

__extension__ typedef unsigned __int128 uint128;

inline constexpr std::uint32_t kMinRadix = 2;
inline constexpr std::uint32_t kMaxRadix = 1u << 16;

class NumeralString {
public:
    NumeralString() = default;
    /// Throws ParameterError for a radix outside [2, 2^16] and
    /// MalformedInputError when a digit is >= radix.
    NumeralString(std::vector<std::uint16_t> digits, std::uint32_t radix);

    /// `length` zero digits.
    [[nodiscard]] static NumeralString zeros(std::size_t length, std::uint32_t radix);

    /// Parses a digit string using 0-9 then a-z (case-insensitive), the
    /// alphabet of the published FF3 samples.
    [[nodiscard]] static NumeralString parse(std::string_view text, std::uint32_t radix);

    [[nodiscard]] std::uint32_t radix() const noexcept { return radix_; }
    [[nodiscard]] std::size_t size() const noexcept { return digits_.size(); }
    [[nodiscard]] bool empty() const noexcept { return digits_.empty(); }
    [[nodiscard]] std::span<const std::uint16_t> digits() const noexcept { return digits_; }
    [[nodiscard]] std::uint16_t operator[](std::size_t i) const noexcept { return digits_[i]; }

    /// Inverse of parse(); only defined for radix <= 36.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const NumeralString&, const NumeralString&) = default;

private:
    std::vector<std::uint16_t> digits_;
    std::uint32_t radix_ = 10;
};

/// Value of the digits read most-significant first. Throws RangeError when
/// the value does not fit in 128 bits.
[[nodiscard]] uint128 num(const NumeralString& x);
[[nodiscard]] uint128 num(std::span<const std::uint16_t> digits, std::uint32_t radix);

/// The unique `length`-digit representation of `value`. Throws RangeError
/// when value >= radix^length.
[[nodiscard]] NumeralString str(uint128 value, std::size_t length, std::uint32_t radix);

[[nodiscard]] NumeralString rev(const NumeralString& x);
[[nodiscard]] std::vector<std::uint8_t> revb(std::span<const std::uint8_t> bytes);

/// radix^exponent, or 0 when that overflows 128 bits.
[[nodiscard]] uint128 checked_pow(std::uint32_t radix, std::size_t exponent) noexcept;

/// Decimal text of a 128-bit value.
[[nodiscard]] std::string to_decimal(uint128 value);
/// Parses decimal or 0x-prefixed hex. Throws FormatError.
[[nodiscard]] uint128 parse_uint128(std::string_view text);

}  // namespace pcscrypt::fpe
