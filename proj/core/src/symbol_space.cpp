#include "pcscrypt/symbol_space.hpp"

#include <string>

#include "pcscrypt/error.hpp"

namespace pcscrypt::alphabet {

namespace {

// Reverse lookup for control bytes: index offset from 256, or -1.
constexpr std::array<std::int8_t, 256> make_control_offsets() {
    std::array<std::int8_t, 256> out{};
    out.fill(-1);
    for (std::size_t i = 0; i < kMappedControlCodes.size(); ++i) {
        out[kMappedControlCodes[i]] = static_cast<std::int8_t>(i);
    }
    return out;
}

constexpr auto kControlOffsets = make_control_offsets();

}  // namespace

SymbolIndex::SymbolIndex(std::uint32_t value) {
    if (value >= kRadix) {
        throw RangeError("symbol index " + std::to_string(value) + " outside [0, 266]");
    }
    value_ = static_cast<std::uint16_t>(value);
}

SymbolIndex map_symbol(codec::Symbol8b10b sym) {
    if (!sym.is_control) return SymbolIndex::unchecked(sym.value);
    if (sym.value == 0xFC) {
        throw ExcludedSymbolError("K28.7 is excluded from the encryption alphabet");
    }
    const auto offset = kControlOffsets[sym.value];
    if (offset < 0) throw InvalidSymbolError(codec::to_string(sym) + " is not a valid control code");
    return SymbolIndex::unchecked(static_cast<std::uint16_t>(256 + offset));
}

codec::Symbol8b10b reverse_map(SymbolIndex index) {
    const auto v = index.value();
    if (v < 256) return codec::Symbol8b10b::data(static_cast<std::uint8_t>(v));
    return codec::Symbol8b10b{kMappedControlCodes[v - 256], true};
}

codec::Symbol8b10b reverse_map(std::uint32_t index) { return reverse_map(SymbolIndex(index)); }

}  // namespace pcscrypt::alphabet
