#pragma once

// The 267-symbol encryption alphabet: every valid 8b/10b symbol except
// /K28.7/, numbered 0..266.
//
// Canonical order: data byte v -> v (0..255), then the 11 permitted control
// codes in ascending byte order -> 256..266. Both ends of a link must use the
// same table; it is public and key-independent.

#include <array>
#include <cstdint>

#include "pcscrypt/codec8b10b.hpp"

namespace pcscrypt::alphabet {

inline constexpr std::uint32_t kRadix = 267;

/// Control codes that take part in encryption, in index order (256..266).
inline constexpr std::array<std::uint8_t, 11> kMappedControlCodes = {
    0x1C, 0x3C, 0x5C, 0x7C, 0x9C, 0xBC, 0xDC, 0xF7, 0xFB, 0xFD, 0xFE};

/// An element of Z/267Z.
class SymbolIndex {
public:
    constexpr SymbolIndex() noexcept = default;
    /// Throws RangeError when `value` >= 267.
    explicit SymbolIndex(std::uint32_t value);

    [[nodiscard]] static constexpr SymbolIndex unchecked(std::uint16_t value) noexcept {
        SymbolIndex s;
        s.value_ = value;
        return s;
    }

    [[nodiscard]] constexpr std::uint16_t value() const noexcept { return value_; }

    friend constexpr bool operator==(SymbolIndex, SymbolIndex) = default;
    friend constexpr auto operator<=>(SymbolIndex, SymbolIndex) = default;

private:
    std::uint16_t value_ = 0;
};

/// Throws ExcludedSymbolError for /K28.7/ and InvalidSymbolError for any
/// other control flag on a non-control byte.
[[nodiscard]] SymbolIndex map_symbol(codec::Symbol8b10b sym);

/// Inverse of map_symbol(). Never yields /K28.7/.
[[nodiscard]] codec::Symbol8b10b reverse_map(SymbolIndex index);

/// Range-checked convenience overload; throws RangeError for i >= 267.
[[nodiscard]] codec::Symbol8b10b reverse_map(std::uint32_t index);

[[nodiscard]] constexpr SymbolIndex add_mod(SymbolIndex a, SymbolIndex k) noexcept {
    const unsigned s = static_cast<unsigned>(a.value()) + k.value();
    return SymbolIndex::unchecked(static_cast<std::uint16_t>(s >= kRadix ? s - kRadix : s));
}

[[nodiscard]] constexpr SymbolIndex sub_mod(SymbolIndex c, SymbolIndex k) noexcept {
    const unsigned s = static_cast<unsigned>(c.value()) + kRadix - k.value();
    return SymbolIndex::unchecked(static_cast<std::uint16_t>(s >= kRadix ? s - kRadix : s));
}

/// True for the 267 symbols that are valid and not /K28.7/.
[[nodiscard]] constexpr bool is_mappable(codec::Symbol8b10b sym) noexcept {
    return sym.valid() && !(sym.is_control && sym.value == 0xFC);
}

}  // namespace pcscrypt::alphabet
