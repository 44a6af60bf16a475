#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pcscrypt::pcs {

using MacAddress = std::array<std::uint8_t, 6>;

/// CRC-32 of IEEE 802.3: reflected polynomial 0x04C11DB7, init all-ones,
/// final complement.
[[nodiscard]] std::uint32_t crc32(std::span<const std::uint8_t> bytes) noexcept;

struct EthernetFrame {
    MacAddress dst{};
    MacAddress src{};
    std::uint16_t ethertype = 0;
    std::vector<std::uint8_t> payload;
    std::uint32_t fcs = 0;

    /// dst | src | ethertype (big-endian) | payload, without FCS.
    [[nodiscard]] std::vector<std::uint8_t> header_and_payload() const;
    /// Full MAC frame as sent on the wire; FCS least-significant byte first.
    [[nodiscard]] std::vector<std::uint8_t> wire_bytes() const;

    void seal() { fcs = crc32(header_and_payload()); }
    [[nodiscard]] bool fcs_ok() const { return fcs == crc32(header_and_payload()); }

    /// Parses wire_bytes() output; nullopt when shorter than header + FCS or
    /// when the FCS does not match.
    [[nodiscard]] static std::optional<EthernetFrame> parse(std::span<const std::uint8_t> wire);

    friend bool operator==(const EthernetFrame&, const EthernetFrame&) = default;
};

inline constexpr std::size_t kMacHeaderBytes = 14;
inline constexpr std::size_t kFcsBytes = 4;
inline constexpr std::uint8_t kPreambleByte = 0x55;
inline constexpr std::uint8_t kSfdByte = 0xD5;
inline constexpr std::size_t kPreambleBytes = 7;

}  // namespace pcscrypt::pcs
