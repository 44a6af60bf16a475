#pragma once

// Flat key=value stream cipher configuration:
//
//   key_hex = 2b7e151628aed2a6abf7158809cf4f3c   (required, 32 hex digits)
//   tweak_hex = 0000000000000000                (default zero)
//   radix = 267
//   blocksize = 22
//   init_counter = 0                            (decimal or 0x hex)
//   bits_per_symbol = 8
//
// '#' starts a comment; whitespace around keys and values is ignored.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "pcscrypt/ctr_stream.hpp"

namespace pcscrypt::config {

/// Throws ConfigError naming the line for unknown or repeated keys, bad
/// values, or a missing key_hex. Does not run validate_config().
[[nodiscard]] ctr::StreamCipherConfig parse_config(std::istream& in);
[[nodiscard]] ctr::StreamCipherConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config(); includes the key.
[[nodiscard]] std::string format_config(const ctr::StreamCipherConfig& cfg);

[[nodiscard]] std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace pcscrypt::config
