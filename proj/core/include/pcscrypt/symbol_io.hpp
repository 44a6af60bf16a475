#pragma once

// Symbol trace files.
//
//  .sym   text, one Dx.y / Kx.y per line; '#' starts a comment; blank lines
//         are skipped.
//  .symb  binary: "S10B", version byte 0x01, symbol count as u64
//         little-endian, then 2 bytes per symbol: byte 0 bit 0 = K flag
//         (other bits zero), byte 1 = 8-bit value.
//  .idx   text, one alphabet index (0..266) per line; '#' comments.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pcscrypt/codec8b10b.hpp"

namespace pcscrypt::io {

using codec::Symbol8b10b;

enum class SymbolFormat : std::uint8_t { text, binary, index };

inline constexpr char kBinaryMagic[4] = {'S', '1', '0', 'B'};
inline constexpr std::uint8_t kBinaryVersion = 1;

/// From the extension: .sym, .symb or .idx. Throws FormatError otherwise.
[[nodiscard]] SymbolFormat format_for(const std::filesystem::path& path);

struct SymbolFile {
    std::vector<Symbol8b10b> symbols;
    /// Source line of each symbol for text input; empty for binary input.
    std::vector<std::size_t> lines;

    /// "line N" or "offset N" for symbol i.
    [[nodiscard]] std::string where(std::size_t i) const;
};

/// Text or binary symbols. Throws FormatError for malformed content and
/// InvalidSymbolError for a K flag on a byte that is not a control code.
[[nodiscard]] SymbolFile read_symbols(std::istream& in, SymbolFormat format);
[[nodiscard]] SymbolFile read_symbols(const std::filesystem::path& path);

void write_symbols(std::ostream& out, std::span<const Symbol8b10b> symbols, SymbolFormat format);
void write_symbols(const std::filesystem::path& path, std::span<const Symbol8b10b> symbols);

/// Throws FormatError on a non-numeric line or an index >= radix.
[[nodiscard]] std::vector<std::uint16_t> read_indices(std::istream& in, std::uint32_t radix = 267);
void write_indices(std::ostream& out, std::span<const std::uint16_t> indices);

/// Alphabet indices from any of the three formats; symbols are mapped with
/// the canonical table (ExcludedSymbolError names the offending line).
[[nodiscard]] std::vector<std::uint16_t> read_index_trace(const std::filesystem::path& path);

}  // namespace pcscrypt::io
