#pragma once

// IEEE 802.3 Clause 36 8b/10b line code: encoder, decoder, running disparity
// and comma scanning over the serialized bitstream.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcscrypt::codec {

/// The 12 valid control codes in ascending byte order:
/// K28.0-K28.7 followed by K23.7, K27.7, K29.7, K30.7.
inline constexpr std::array<std::uint8_t, 12> kControlCodes = {
    0x1C, 0x3C, 0x5C, 0x7C, 0x9C, 0xBC, 0xDC, 0xFC, 0xF7, 0xFB, 0xFD, 0xFE};

[[nodiscard]] constexpr bool is_valid_control_code(std::uint8_t value) noexcept {
    for (auto code : kControlCodes) {
        if (code == value) return true;
    }
    return false;
}

/// One PCS symbol: an 8-bit value plus the K (control) flag.
struct Symbol8b10b {
    std::uint8_t value = 0;
    bool is_control = false;

    [[nodiscard]] static constexpr Symbol8b10b data(std::uint8_t v) noexcept { return {v, false}; }
    /// Throws InvalidSymbolError unless `v` is one of kControlCodes.
    [[nodiscard]] static Symbol8b10b control(std::uint8_t v);

    /// The "x" of Dx.y / Kx.y.
    [[nodiscard]] constexpr unsigned x() const noexcept { return value & 0x1Fu; }
    /// The "y" of Dx.y / Kx.y.
    [[nodiscard]] constexpr unsigned y() const noexcept { return value >> 5; }

    [[nodiscard]] constexpr bool valid() const noexcept {
        return !is_control || is_valid_control_code(value);
    }

    friend constexpr bool operator==(const Symbol8b10b&, const Symbol8b10b&) = default;
};

namespace symbols {
inline constexpr Symbol8b10b K28_0{0x1C, true};
inline constexpr Symbol8b10b K28_1{0x3C, true};
inline constexpr Symbol8b10b K28_5{0xBC, true};
inline constexpr Symbol8b10b K28_7{0xFC, true};
inline constexpr Symbol8b10b K23_7{0xF7, true};  // /R/ carrier extend
inline constexpr Symbol8b10b K27_7{0xFB, true};  // /S/ start of packet
inline constexpr Symbol8b10b K29_7{0xFD, true};  // /T/ end of packet
inline constexpr Symbol8b10b K30_7{0xFE, true};  // /V/ error propagation
inline constexpr Symbol8b10b D16_2{0x50, false};
inline constexpr Symbol8b10b D0_0{0x00, false};
}  // namespace symbols

/// "Dx.y" / "Kx.y" notation.
[[nodiscard]] std::string to_string(Symbol8b10b sym);
/// Parses "Dx.y" / "Kx.y" (case-insensitive prefix). Throws FormatError on
/// malformed text and InvalidSymbolError for a K code outside kControlCodes.
[[nodiscard]] Symbol8b10b parse_symbol(std::string_view text);

/// Ten-bit code group. Bit 9 holds `a` (first on the wire), bit 0 holds `j`.
struct TenBitCode {
    std::uint16_t bits = 0;

    [[nodiscard]] constexpr int ones() const noexcept { return std::popcount(static_cast<unsigned>(bits & 0x3FFu)); }
    /// Disparity of the code group: -2, 0 or +2 for every legal code.
    [[nodiscard]] constexpr int disparity() const noexcept { return 2 * ones() - 10; }
    /// "abcdei fghj" text form.
    [[nodiscard]] std::string to_string() const;

    friend constexpr bool operator==(const TenBitCode&, const TenBitCode&) = default;
};

enum class Disparity : std::uint8_t { negative, positive };

[[nodiscard]] constexpr Disparity opposite(Disparity rd) noexcept {
    return rd == Disparity::negative ? Disparity::positive : Disparity::negative;
}

struct Encoded {
    TenBitCode code;
    Disparity rd;
};

/// Standard code group for `sym` under running disparity `rd` and the
/// disparity that follows it. Throws InvalidSymbolError for a bad K code.
[[nodiscard]] Encoded encode(Symbol8b10b sym, Disparity rd);

enum class DecodeStatus : std::uint8_t {
    ok,
    disparity_error,  ///< valid code group, but only legal under the opposite disparity
    code_error,       ///< not a code group of the tables at all
};

struct Decoded {
    Symbol8b10b symbol;  ///< meaningful unless status == code_error
    Disparity rd;
    DecodeStatus status;
};

/// Inverse of encode(). Never throws; errors are reported through `status`.
[[nodiscard]] Decoded decode(TenBitCode code, Disparity rd) noexcept;

/// Stateful encoder threading running disparity; starts at RD-.
class Encoder {
public:
    explicit Encoder(Disparity initial = Disparity::negative) noexcept : rd_(initial) {}

    TenBitCode operator()(Symbol8b10b sym) {
        auto [code, rd] = encode(sym, rd_);
        rd_ = rd;
        return code;
    }

    [[nodiscard]] Disparity disparity() const noexcept { return rd_; }

private:
    Disparity rd_;
};

class Decoder {
public:
    explicit Decoder(Disparity initial = Disparity::negative) noexcept : rd_(initial) {}

    Decoded operator()(TenBitCode code) noexcept {
        auto out = decode(code, rd_);
        rd_ = out.rd;
        return out;
    }

    [[nodiscard]] Disparity disparity() const noexcept { return rd_; }

private:
    Disparity rd_;
};

/// Comma patterns, 7 bits in wire order.
inline constexpr std::uint8_t kCommaPlus = 0b0011111;
inline constexpr std::uint8_t kCommaMinus = 0b1100000;

/// Serializes code groups a-first into one byte (0 or 1) per bit.
[[nodiscard]] std::vector<std::uint8_t> serialize(std::span<const TenBitCode> codes);

/// Every bit offset at which 0011111 or 1100000 begins. `bits` holds one bit
/// per element (0 or nonzero).
[[nodiscard]] std::vector<std::size_t> scan_commas(std::span<const std::uint8_t> bits);

/// Incremental comma scanner over a stream of code groups. Each comma is
/// reported once, when its last bit arrives.
class CommaScanner {
public:
    /// Feeds one code group; calls `on_comma(offset)` for each comma whose
    /// final bit lies inside it.
    template <class Callback>
    void push(TenBitCode code, Callback&& on_comma) {
        history_ = ((history_ << 10) | (code.bits & 0x3FFu)) & 0xFFFFu;
        const std::size_t prior = bits_seen_;
        bits_seen_ += 10;
        // Starts in [prior - 6, prior + 3]; window of 16 bits covers them.
        for (int rel = -6; rel <= 3; ++rel) {
            if (rel < 0 && prior < static_cast<std::size_t>(-rel)) continue;
            const int shift = 16 - 7 - (rel + 6);
            const auto window = static_cast<std::uint8_t>((history_ >> shift) & 0x7Fu);
            if (window == kCommaPlus || window == kCommaMinus) {
                on_comma(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(prior) + rel));
            }
        }
    }

    [[nodiscard]] std::size_t bits_seen() const noexcept { return bits_seen_; }

private:
    std::uint32_t history_ = 0;
    std::size_t bits_seen_ = 0;
};

}  // namespace pcscrypt::codec
