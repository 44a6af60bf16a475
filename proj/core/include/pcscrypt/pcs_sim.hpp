#pragma once

// Symbol-accurate 1000BASE-X PCS link: frame generator, TX PCS symbol flow,
// in-line encryption, 8b/10b line coding, and the mirrored RX path with frame
// extraction and CRC checking.
//
// On-wire layout of one frame period (one symbol per byte):
//   /S/ (K27.7), 7 x 0x55, SFD 0xD5, MAC header (14), payload, FCS (4),
//   /T/ (K29.7), /R/ (K23.7), then N IDLE sets /K28.5/D16.2/.
// Utilization is frame symbols (/S/ through /R/) over total symbols.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pcscrypt/codec8b10b.hpp"
#include "pcscrypt/ctr_stream.hpp"
#include "pcscrypt/error.hpp"
#include "pcscrypt/ethernet.hpp"

namespace pcscrypt::pcs {

using codec::Symbol8b10b;

enum class PatternKind : std::uint8_t { A, B, C, D, custom };

[[nodiscard]] std::string_view to_string(PatternKind kind) noexcept;
/// "A".."D" or "custom"; throws ConfigError otherwise.
[[nodiscard]] PatternKind parse_pattern_kind(std::string_view text);

struct TrafficPattern {
    PatternKind kind = PatternKind::A;
    std::size_t frame_payload_len = 1024;
    double target_utilization = 0.0;
    std::uint64_t payload_seed = 1;

    /// A: idle only; B/C/D: 1024-byte payloads at 10.2 %, 50 %, 91 %.
    /// Payload bytes come from mt19937_64(seed), eight little-endian bytes
    /// per draw.
    [[nodiscard]] static TrafficPattern preset(PatternKind kind, std::uint64_t seed = 1);

    [[nodiscard]] bool idle_only() const noexcept { return target_utilization <= 0.0; }
};

/// Symbols from /S/ through /R/ for one frame: 29 + payload length.
[[nodiscard]] constexpr std::size_t frame_symbols(std::size_t payload_len) noexcept {
    return 1 + kPreambleBytes + 1 + kMacHeaderBytes + payload_len + kFcsBytes + 2;
}

/// Checks frame_payload_len >= 46 and utilization in [0, 1).
[[nodiscard]] ValidationReport validate_pattern(const TrafficPattern& pattern);

/// IDLE sets between frames: the integer gap whose utilization is nearest to
/// the target. Throws ConfigError when that is more than 0.005 away or when
/// no gap of at least one IDLE set can reach it.
[[nodiscard]] std::size_t idle_sets_per_gap(const TrafficPattern& pattern);

struct SymbolTrace {
    std::vector<Symbol8b10b> symbols;

    [[nodiscard]] std::vector<bool> k_flags() const;
    [[nodiscard]] std::size_t size() const noexcept { return symbols.size(); }
};

[[nodiscard]] std::vector<bool> k_flag_trace(const SymbolTrace& trace);

/// Fraction of symbols inside frames (/S/ through /R/).
[[nodiscard]] double measure_utilization(const SymbolTrace& trace);

/// TX PCS controller: produces the symbol flow one period at a time.
class TxPcs {
public:
    /// Throws ConfigError for an invalid or unreachable pattern.
    explicit TxPcs(const TrafficPattern& pattern);

    /// Appends one period to `out`: a frame plus its inter-frame gap, or one
    /// IDLE set for idle-only patterns. Returns the frame, if any.
    std::optional<EthernetFrame> emit_period(std::vector<Symbol8b10b>& out);

    [[nodiscard]] std::size_t frames_sent() const noexcept { return frames_sent_; }
    [[nodiscard]] std::size_t gap_idle_sets() const noexcept { return gap_; }

private:
    EthernetFrame make_frame();

    TrafficPattern pattern_;
    std::size_t gap_ = 0;
    std::size_t frames_sent_ = 0;
    std::mt19937_64 rng_;
};

/// First `n_symbols` symbols of the TX flow for `pattern`.
[[nodiscard]] SymbolTrace generate_tx_stream(const TrafficPattern& pattern, std::size_t n_symbols);

/// RX PCS controller: delimits frames between /S/ and /T/, strips preamble
/// and SFD, and checks the FCS.
class RxPcs {
public:
    /// Returns the MAC frame bytes (with FCS) when a frame with a good CRC
    /// completes on this symbol.
    std::optional<std::vector<std::uint8_t>> push(Symbol8b10b sym);

    [[nodiscard]] std::size_t frames_received() const noexcept { return frames_received_; }
    /// Delimited frames that failed preamble/SFD, length or FCS checks, or were
    /// cut short by another control symbol.
    [[nodiscard]] std::size_t crc_errors() const noexcept { return crc_errors_; }

private:
    std::optional<std::vector<std::uint8_t>> finish();

    bool in_frame_ = false;
    std::vector<std::uint8_t> buffer_;
    std::size_t frames_received_ = 0;
    std::size_t crc_errors_ = 0;
};

struct LinkOptions {
    /// Frame periods to send for framed patterns.
    std::size_t frames = 100;
    /// Symbols to send for idle-only patterns (0 selects 10^6).
    std::size_t idle_symbols = 0;
    bool keep_traces = false;
    /// Receiver configuration when it differs from the transmitter's.
    std::optional<ctr::StreamCipherConfig> rx_config;
};

struct LinkReport {
    TrafficPattern pattern;
    bool encrypted = false;
    std::optional<ctr::StreamCipherConfig> config;

    std::size_t frames_sent = 0;
    std::size_t frames_received = 0;
    std::size_t crc_errors = 0;
    /// Frames with a good CRC whose bytes differ from what was sent.
    std::size_t frame_mismatches = 0;
    std::size_t code_errors = 0;
    std::size_t disparity_errors = 0;
    std::size_t aligned_commas = 0;
    std::size_t misaligned_commas = 0;
    /// Line symbols that are /K28.7/ or an invalid control code.
    std::size_t unsafe_line_symbols = 0;

    std::size_t symbols_in = 0;    ///< from TX PCS
    std::size_t symbols_line = 0;  ///< code groups serialized
    std::size_t symbols_out = 0;   ///< delivered to RX PCS

    double utilization = 0.0;
    double control_fraction_plain = 0.0;
    double control_fraction_line = 0.0;

    SymbolTrace plain_trace;  ///< TX PCS output (before encryption); filled when keep_traces
    SymbolTrace line_trace;   ///< encoder input (after encryption); filled when keep_traces
};

/// Runs TX PCS -> map -> encrypt -> reverse map -> 8b/10b encode -> comma
/// scan -> decode -> map -> decrypt -> reverse map -> RX PCS. Passing no
/// config disables encryption. Errors on the received side are counted in
/// the report, not thrown.
[[nodiscard]] LinkReport run_link(const TrafficPattern& pattern, const std::optional<ctr::StreamCipherConfig>& cfg,
                                  const LinkOptions& options = {});

}  // namespace pcscrypt::pcs
