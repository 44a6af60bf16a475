#pragma once

// FF3 format-preserving block cipher (NIST SP 800-38G, 2016 edition): an
// 8-round alternating Feistel network over numeral strings with AES as the
// round function. This is the original FF3 with its 64-bit tweak, not the
// later FF3-1 revision.
//
// Security caveat: FF3 with a 64-bit tweak has published attacks when the
// tweak is varied under adversarial control. The link cipher fixes the tweak.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pcscrypt/aes.hpp"
#include "pcscrypt/error.hpp"
#include "pcscrypt/numeral.hpp"

namespace pcscrypt::fpe {

using Tweak = std::array<std::uint8_t, 8>;

/// AES-128 key plus FF3 tweak. The tweak defaults to zero.
struct CipherKey {
    std::array<std::uint8_t, 16> key{};
    Tweak tweak{};

    /// Throws FormatError unless key_hex has 32 hex digits and tweak_hex 16.
    [[nodiscard]] static CipherKey from_hex(std::string_view key_hex, std::string_view tweak_hex = "0000000000000000");
};

/// Radix and block-length bounds of one FF3 instance.
struct Ff3Params {
    std::uint32_t radix = 10;
    std::size_t minlen = 2;
    std::size_t maxlen = 2;

    /// Smallest legal minlen and largest legal maxlen for `radix`.
    [[nodiscard]] static Ff3Params for_radix(std::uint32_t radix);
};

/// floor(log_radix(2^96)), computed exactly: the largest k with radix^k <= 2^96.
[[nodiscard]] std::size_t max_half_length(std::uint32_t radix) noexcept;

/// Checks radix in [2, 2^16], radix^minlen >= 100, and
/// 2 <= minlen <= maxlen <= 2*floor(log_radix(2^96)); one entry per violated clause.
[[nodiscard]] ValidationReport validate_params(const Ff3Params& params);

class Ff3Cipher {
public:
    /// `key` may be 16, 24 or 32 bytes. Throws ParameterError if params fail validation.
    Ff3Cipher(std::span<const std::uint8_t> key, const Ff3Params& params);
    Ff3Cipher(const CipherKey& key, const Ff3Params& params) : Ff3Cipher(std::span(key.key), params) {}

    [[nodiscard]] NumeralString encrypt(const NumeralString& x, const Tweak& tweak) const;
    [[nodiscard]] NumeralString decrypt(const NumeralString& x, const Tweak& tweak) const;

    /// Allocation-free forms; `in` and `out` have equal length and may alias.
    /// Digits are not range-checked here.
    void encrypt_digits(std::span<const std::uint16_t> in, std::span<std::uint16_t> out, const Tweak& tweak) const;
    void decrypt_digits(std::span<const std::uint16_t> in, std::span<std::uint16_t> out, const Tweak& tweak) const;

    [[nodiscard]] const Ff3Params& params() const noexcept { return params_; }

private:
    void check_input(const NumeralString& x) const;
    uint128 round_value(int round, const Tweak& tweak, std::span<const std::uint16_t> half) const;

    AesBlockCipher aes_;
    Ff3Params params_;
};

[[nodiscard]] NumeralString ff3_encrypt(const CipherKey& key, const NumeralString& x, const Ff3Params& params);
[[nodiscard]] NumeralString ff3_decrypt(const CipherKey& key, const NumeralString& x, const Ff3Params& params);

/// One entry of a sample-vector file.
struct Ff3Vector {
    std::string label;
    std::vector<std::uint8_t> key;
    Tweak tweak{};
    std::uint32_t radix = 10;
    std::string plaintext;
    std::string ciphertext;
};

/// Reads sample vectors in the NIST sample-file layout:
///
///     Sample #1
///     FF3-AES128
///     Key is EF 43 59 D8 ...
///     Radix = 10
///     Tweak is D8 E7 92 0A FA 33 0A 73
///     PT is <890121234567890000>
///     CT is <750918814058654607>
///
/// Lines of whitespace and `#` comments are ignored. Throws FormatError.
[[nodiscard]] std::vector<Ff3Vector> read_ff3_vectors(std::istream& in);

struct VectorOutcome {
    std::string label;
    bool encrypt_ok = false;
    bool decrypt_ok = false;
    std::string got;
};

[[nodiscard]] VectorOutcome check_vector(const Ff3Vector& v);

std::vector<std::uint8_t> parse_hex(std::string_view hex);

}  // namespace pcscrypt::fpe
