#include "pcscrypt/ethernet.hpp"

#include <algorithm>

#include <zlib.h>

namespace pcscrypt::pcs {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) noexcept {
    // zlib's crc32() is the 802.3 CRC; feed in chunks to respect uInt.
    uLong crc = ::crc32(0L, Z_NULL, 0);
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
        const auto n = static_cast<uInt>(std::min(kChunk, bytes.size() - off));
        crc = ::crc32(crc, bytes.data() + off, n);
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> EthernetFrame::header_and_payload() const {
    std::vector<std::uint8_t> out;
    out.reserve(kMacHeaderBytes + payload.size());
    out.insert(out.end(), dst.begin(), dst.end());
    out.insert(out.end(), src.begin(), src.end());
    out.push_back(static_cast<std::uint8_t>(ethertype >> 8));
    out.push_back(static_cast<std::uint8_t>(ethertype & 0xFF));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<std::uint8_t> EthernetFrame::wire_bytes() const {
    auto out = header_and_payload();
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(fcs >> (8 * i)));
    return out;
}

std::optional<EthernetFrame> EthernetFrame::parse(std::span<const std::uint8_t> wire) {
    if (wire.size() < kMacHeaderBytes + kFcsBytes) return std::nullopt;
    EthernetFrame f;
    std::copy_n(wire.begin(), 6, f.dst.begin());
    std::copy_n(wire.begin() + 6, 6, f.src.begin());
    f.ethertype = static_cast<std::uint16_t>((wire[12] << 8) | wire[13]);
    const auto body_end = wire.size() - kFcsBytes;
    f.payload.assign(wire.begin() + kMacHeaderBytes, wire.begin() + static_cast<std::ptrdiff_t>(body_end));
    f.fcs = 0;
    for (int i = 0; i < 4; ++i) f.fcs |= static_cast<std::uint32_t>(wire[body_end + i]) << (8 * i);
    if (crc32(wire.first(body_end)) != f.fcs) return std::nullopt;
    return f;
}

}  // namespace pcscrypt::pcs
