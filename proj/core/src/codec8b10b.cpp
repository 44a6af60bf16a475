#include "pcscrypt/codec8b10b.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "pcscrypt/error.hpp"

namespace pcscrypt::codec {

namespace {

// 5b/6b sub-block "abcdei" for RD-. The RD+ form is the bitwise complement
// whenever the sub-block is unbalanced, and for D.7 (111000 / 000111).
constexpr std::array<std::uint8_t, 32> kSixBit = {
    0b100111, 0b011101, 0b101101, 0b110001, 0b110101, 0b101001, 0b011001, 0b111000,
    0b111001, 0b100101, 0b010101, 0b110100, 0b001101, 0b101100, 0b011100, 0b010111,
    0b011011, 0b100011, 0b010011, 0b110010, 0b001011, 0b101010, 0b011010, 0b111010,
    0b110011, 0b100110, 0b010110, 0b110110, 0b001110, 0b101110, 0b011110, 0b101011};
constexpr std::uint8_t kSixBitK28 = 0b001111;

// 3b/4b sub-block "fghj" for RD- (as seen after the 6b sub-block).
constexpr std::array<std::uint8_t, 8> kFourBitData = {
    0b1011, 0b1001, 0b0101, 0b1100, 0b1101, 0b1010, 0b0110, 0b1110};
constexpr std::array<std::uint8_t, 8> kFourBitK28 = {
    0b1011, 0b0110, 0b1010, 0b1100, 0b1101, 0b0101, 0b1001, 0b0111};
constexpr std::uint8_t kFourBitA7 = 0b0111;

constexpr int ones(unsigned v) {
    int n = 0;
    for (; v != 0; v &= v - 1) ++n;
    return n;
}

struct SubBlock {
    unsigned bits;
    Disparity rd;
};

constexpr SubBlock six_bit(unsigned x, bool k28, Disparity rd) {
    const unsigned base = k28 ? kSixBitK28 : kSixBit[x];
    const bool balanced = ones(base) == 3;
    const bool flip_form = !balanced || (!k28 && x == 7);
    if (rd == Disparity::negative) {
        return {base, balanced ? rd : Disparity::positive};
    }
    return {flip_form ? (~base & 0x3Fu) : base, balanced ? rd : Disparity::negative};
}

constexpr SubBlock four_bit(unsigned x, unsigned y, bool control, Disparity rd) {
    unsigned base = kFourBitData[y];
    if (control && x == 28) {
        base = kFourBitK28[y];
    } else if (y == 7) {
        const bool alt = control ||
                         (rd == Disparity::negative && (x == 17 || x == 18 || x == 20)) ||
                         (rd == Disparity::positive && (x == 11 || x == 13 || x == 14));
        if (alt) base = kFourBitA7;
    }
    const bool balanced = ones(base) == 2;
    // x.1, x.2, x.5, x.6 data sub-blocks are the same for both disparities;
    // x.3 and all K28 forms alternate even though some are balanced.
    const bool alternates = !balanced || y == 3 || (control && x == 28);
    if (rd == Disparity::negative) {
        return {base, balanced ? rd : Disparity::positive};
    }
    return {alternates ? (~base & 0xFu) : base, balanced ? rd : Disparity::negative};
}

constexpr Encoded encode_raw(std::uint8_t value, bool control, Disparity rd) {
    const unsigned x = value & 0x1Fu;
    const unsigned y = value >> 5;
    const auto six = six_bit(x, control && x == 28, rd);
    const auto four = four_bit(x, y, control, six.rd);
    return {TenBitCode{static_cast<std::uint16_t>((six.bits << 4) | four.bits)}, four.rd};
}

// Encode table indexed by [rd][control][value]; invalid K slots are unused.
struct EncodeTable {
    std::array<std::array<std::array<Encoded, 256>, 2>, 2> entries{};
};

constexpr EncodeTable make_encode_table() {
    EncodeTable t{};
    for (int rd = 0; rd < 2; ++rd) {
        for (int v = 0; v < 256; ++v) {
            const auto d = static_cast<Disparity>(rd);
            t.entries[rd][0][v] = encode_raw(static_cast<std::uint8_t>(v), false, d);
            t.entries[rd][1][v] = encode_raw(static_cast<std::uint8_t>(v), true, d);
        }
    }
    return t;
}

constexpr EncodeTable kEncode = make_encode_table();

// Decode table per running disparity. Entry bit 15 = present, bit 9 = rd out
// is positive, bit 8 = control, low byte = value.
struct DecodeTable {
    std::array<std::array<std::uint16_t, 1024>, 2> entries{};
};

constexpr std::uint16_t kPresent = 0x8000;
constexpr std::uint16_t kRdPositive = 0x0200;
constexpr std::uint16_t kControl = 0x0100;

constexpr DecodeTable make_decode_table() {
    DecodeTable t{};
    for (int rd = 0; rd < 2; ++rd) {
        for (int v = 0; v < 256; ++v) {
            for (int c = 0; c < 2; ++c) {
                if (c == 1 && !is_valid_control_code(static_cast<std::uint8_t>(v))) continue;
                const auto e = kEncode.entries[rd][c][v];
                std::uint16_t entry = kPresent | static_cast<std::uint16_t>(v);
                if (c == 1) entry |= kControl;
                if (e.rd == Disparity::positive) entry |= kRdPositive;
                t.entries[rd][e.code.bits] = entry;
            }
        }
    }
    return t;
}

constexpr DecodeTable kDecode = make_decode_table();

}  // namespace

Symbol8b10b Symbol8b10b::control(std::uint8_t v) {
    if (!is_valid_control_code(v)) {
        throw InvalidSymbolError("not a valid 8b/10b control code: K" + std::to_string(v & 0x1F) + "." +
                                 std::to_string(v >> 5));
    }
    return {v, true};
}

std::string to_string(Symbol8b10b sym) {
    std::string out(1, sym.is_control ? 'K' : 'D');
    out += std::to_string(sym.x());
    out += '.';
    out += std::to_string(sym.y());
    return out;
}

Symbol8b10b parse_symbol(std::string_view text) {
    auto fail = [&] { return FormatError("malformed symbol '" + std::string(text) + "'"); };
    if (text.size() < 4) throw fail();
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
    if (kind != 'D' && kind != 'K') throw fail();
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) throw fail();

    auto parse_part = [&](std::string_view part, unsigned limit) {
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || v > limit) throw fail();
        return v;
    };
    const unsigned x = parse_part(text.substr(1, dot - 1), 31);
    const unsigned y = parse_part(text.substr(dot + 1), 7);
    const auto value = static_cast<std::uint8_t>((y << 5) | x);
    return kind == 'K' ? Symbol8b10b::control(value) : Symbol8b10b::data(value);
}

std::string TenBitCode::to_string() const {
    std::string out;
    out.reserve(11);
    for (int i = 9; i >= 0; --i) {
        out += ((bits >> i) & 1u) ? '1' : '0';
        if (i == 4) out += ' ';
    }
    return out;
}

Encoded encode(Symbol8b10b sym, Disparity rd) {
    if (!sym.valid()) {
        throw InvalidSymbolError("cannot encode " + to_string(sym) + ": not a valid control code");
    }
    return kEncode.entries[static_cast<int>(rd)][sym.is_control ? 1 : 0][sym.value];
}

Decoded decode(TenBitCode code, Disparity rd) noexcept {
    const unsigned bits = code.bits & 0x3FFu;
    const auto unpack = [](std::uint16_t e, DecodeStatus status) {
        return Decoded{Symbol8b10b{static_cast<std::uint8_t>(e & 0xFF), (e & kControl) != 0},
                       (e & kRdPositive) ? Disparity::positive : Disparity::negative, status};
    };
    if (auto e = kDecode.entries[static_cast<int>(rd)][bits]; e & kPresent) {
        return unpack(e, DecodeStatus::ok);
    }
    if (auto e = kDecode.entries[static_cast<int>(opposite(rd))][bits]; e & kPresent) {
        return unpack(e, DecodeStatus::disparity_error);
    }
    // Unknown group: resynchronise disparity from its weight, as receivers do.
    const int d = code.disparity();
    const Disparity next = d > 0 ? Disparity::positive : d < 0 ? Disparity::negative : rd;
    return Decoded{Symbol8b10b{}, next, DecodeStatus::code_error};
}

std::vector<std::uint8_t> serialize(std::span<const TenBitCode> codes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(codes.size() * 10);
    for (auto code : codes) {
        for (int i = 9; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((code.bits >> i) & 1u));
    }
    return bits;
}

std::vector<std::size_t> scan_commas(std::span<const std::uint8_t> bits) {
    std::vector<std::size_t> offsets;
    if (bits.size() < 7) return offsets;
    unsigned window = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        window = ((window << 1) | (bits[i] ? 1u : 0u)) & 0x7Fu;
        if (i >= 6 && (window == kCommaPlus || window == kCommaMinus)) offsets.push_back(i - 6);
    }
    return offsets;
}

}  // namespace pcscrypt::codec
