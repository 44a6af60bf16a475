#include "pcscrypt/pcs_sim.hpp"

#include <algorithm>
#include <cmath>

#include "pcscrypt/symbol_space.hpp"

namespace pcscrypt::pcs {

namespace sym = codec::symbols;

namespace {

constexpr MacAddress kDst{0x02, 0x00, 0x00, 0x00, 0x00, 0x02};
constexpr MacAddress kSrc{0x02, 0x00, 0x00, 0x00, 0x00, 0x01};
constexpr std::uint16_t kEthertype = 0x88B5;
constexpr std::size_t kMinPayload = 46;
constexpr std::size_t kMaxRxFrame = 16384;
constexpr double kUtilizationTolerance = 0.005;

void push_idle(std::vector<Symbol8b10b>& out) {
    out.push_back(sym::K28_5);
    out.push_back(sym::D16_2);
}

}  // namespace

std::string_view to_string(PatternKind kind) noexcept {
    switch (kind) {
        case PatternKind::A: return "A";
        case PatternKind::B: return "B";
        case PatternKind::C: return "C";
        case PatternKind::D: return "D";
        case PatternKind::custom: return "custom";
    }
    return "custom";
}

PatternKind parse_pattern_kind(std::string_view text) {
    if (text == "A" || text == "a") return PatternKind::A;
    if (text == "B" || text == "b") return PatternKind::B;
    if (text == "C" || text == "c") return PatternKind::C;
    if (text == "D" || text == "d") return PatternKind::D;
    if (text == "custom") return PatternKind::custom;
    throw ConfigError("unknown traffic pattern '" + std::string(text) + "' (expected A, B, C, D or custom)");
}

TrafficPattern TrafficPattern::preset(PatternKind kind, std::uint64_t seed) {
    TrafficPattern p;
    p.kind = kind;
    p.payload_seed = seed;
    switch (kind) {
        case PatternKind::A: p.target_utilization = 0.0; break;
        case PatternKind::B: p.target_utilization = 0.102; break;
        case PatternKind::C: p.target_utilization = 0.5; break;
        case PatternKind::D: p.target_utilization = 0.91; break;
        case PatternKind::custom: throw ConfigError("custom patterns have no preset");
    }
    return p;
}

ValidationReport validate_pattern(const TrafficPattern& pattern) {
    ValidationReport r;
    if (!(pattern.target_utilization >= 0.0 && pattern.target_utilization < 1.0)) {
        r.violations.push_back("utilization " + std::to_string(pattern.target_utilization) + " outside [0, 1)");
    }
    if (!pattern.idle_only() && pattern.frame_payload_len < kMinPayload) {
        r.violations.push_back("payload length " + std::to_string(pattern.frame_payload_len) + " below " +
                               std::to_string(kMinPayload));
    }
    return r;
}

std::size_t idle_sets_per_gap(const TrafficPattern& pattern) {
    if (auto r = validate_pattern(pattern); !r.ok()) throw ConfigError("invalid traffic pattern: " + r.summary());
    if (pattern.idle_only()) return 0;
    const double f = static_cast<double>(frame_symbols(pattern.frame_payload_len));
    const double u = pattern.target_utilization;
    const double k_real = (f / u - f) / 2.0;
    const auto k = static_cast<std::size_t>(std::max(1.0, std::round(k_real)));
    const double achieved = f / (f + 2.0 * static_cast<double>(k));
    if (std::abs(achieved - u) > kUtilizationTolerance) {
        throw ConfigError("utilization " + std::to_string(u) + " unreachable with " +
                          std::to_string(pattern.frame_payload_len) + "-byte payloads; nearest is " +
                          std::to_string(achieved));
    }
    return k;
}

std::vector<bool> SymbolTrace::k_flags() const {
    std::vector<bool> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = symbols[i].is_control;
    return out;
}

std::vector<bool> k_flag_trace(const SymbolTrace& trace) { return trace.k_flags(); }

double measure_utilization(const SymbolTrace& trace) {
    if (trace.symbols.empty()) return 0.0;
    std::size_t in_frame = 0;
    bool inside = false;
    for (const auto s : trace.symbols) {
        if (s == sym::K27_7) inside = true;
        if (inside) ++in_frame;
        if (inside && s == sym::K23_7) inside = false;
    }
    return static_cast<double>(in_frame) / static_cast<double>(trace.symbols.size());
}

// ---------------------------------------------------------------------------
// TX

TxPcs::TxPcs(const TrafficPattern& pattern)
    : pattern_(pattern), gap_(idle_sets_per_gap(pattern)), rng_(pattern.payload_seed) {}

EthernetFrame TxPcs::make_frame() {
    EthernetFrame f;
    f.dst = kDst;
    f.src = kSrc;
    f.ethertype = kEthertype;
    f.payload.resize(pattern_.frame_payload_len);
    for (std::size_t i = 0; i < f.payload.size(); i += 8) {
        const auto word = rng_();
        for (std::size_t j = 0; j < 8 && i + j < f.payload.size(); ++j) {
            f.payload[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
        }
    }
    f.seal();
    return f;
}

std::optional<EthernetFrame> TxPcs::emit_period(std::vector<Symbol8b10b>& out) {
    if (pattern_.idle_only()) {
        push_idle(out);
        return std::nullopt;
    }
    auto frame = make_frame();
    out.push_back(sym::K27_7);
    out.insert(out.end(), kPreambleBytes, Symbol8b10b::data(kPreambleByte));
    out.push_back(Symbol8b10b::data(kSfdByte));
    for (const auto b : frame.wire_bytes()) out.push_back(Symbol8b10b::data(b));
    out.push_back(sym::K29_7);
    out.push_back(sym::K23_7);
    for (std::size_t i = 0; i < gap_; ++i) push_idle(out);
    ++frames_sent_;
    return frame;
}

SymbolTrace generate_tx_stream(const TrafficPattern& pattern, std::size_t n_symbols) {
    TxPcs tx(pattern);
    SymbolTrace trace;
    trace.symbols.reserve(n_symbols + frame_symbols(pattern.frame_payload_len) + 2 * tx.gap_idle_sets());
    while (trace.symbols.size() < n_symbols) (void)tx.emit_period(trace.symbols);
    trace.symbols.resize(n_symbols);
    return trace;
}

// ---------------------------------------------------------------------------
// RX

std::optional<std::vector<std::uint8_t>> RxPcs::push(Symbol8b10b s) {
    if (s == sym::K27_7) {
        if (in_frame_) ++crc_errors_;
        in_frame_ = true;
        buffer_.clear();
        return std::nullopt;
    }
    if (!in_frame_) return std::nullopt;
    if (s == sym::K29_7) {
        in_frame_ = false;
        return finish();
    }
    if (s.is_control || buffer_.size() >= kMaxRxFrame) {
        in_frame_ = false;
        ++crc_errors_;
        return std::nullopt;
    }
    buffer_.push_back(s.value);
    return std::nullopt;
}

std::optional<std::vector<std::uint8_t>> RxPcs::finish() {
    constexpr std::size_t kLead = kPreambleBytes + 1;
    const bool lead_ok = buffer_.size() >= kLead + kMacHeaderBytes + kFcsBytes &&
                         std::all_of(buffer_.begin(), buffer_.begin() + kPreambleBytes,
                                     [](std::uint8_t b) { return b == kPreambleByte; }) &&
                         buffer_[kPreambleBytes] == kSfdByte;
    if (lead_ok) {
        std::vector<std::uint8_t> wire(buffer_.begin() + kLead, buffer_.end());
        if (EthernetFrame::parse(wire)) {
            ++frames_received_;
            return wire;
        }
    }
    ++crc_errors_;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Link

LinkReport run_link(const TrafficPattern& pattern, const std::optional<ctr::StreamCipherConfig>& cfg,
                    const LinkOptions& options) {
    LinkReport report;
    report.pattern = pattern;
    report.encrypted = cfg.has_value();
    report.config = cfg;

    TxPcs tx(pattern);
    RxPcs rx;
    std::optional<ctr::SymbolStream> enc;
    std::optional<ctr::SymbolStream> dec;
    if (cfg) {
        enc.emplace(ctr::SymbolStream::from_config(*cfg, ctr::Direction::encrypt));
        dec.emplace(ctr::SymbolStream::from_config(options.rx_config.value_or(*cfg), ctr::Direction::decrypt));
    }
    codec::Encoder encoder;
    codec::Decoder decoder;
    codec::CommaScanner scanner;

    std::size_t frame_symbols_in = 0;
    std::size_t control_plain = 0;
    std::size_t control_line = 0;
    bool inside = false;

    auto on_comma = [&](std::size_t offset) {
        if (offset % 10 == 0) {
            ++report.aligned_commas;
        } else {
            ++report.misaligned_commas;
        }
    };

    auto process = [&](Symbol8b10b plain, const std::vector<std::uint8_t>* expected) {
        ++report.symbols_in;
        if (plain == sym::K27_7) inside = true;
        if (inside) ++frame_symbols_in;
        if (inside && plain == sym::K23_7) inside = false;
        if (plain.is_control) ++control_plain;
        if (options.keep_traces) report.plain_trace.symbols.push_back(plain);

        Symbol8b10b line = plain;
        if (enc) {
            const auto idx = alphabet::map_symbol(plain);
            line = alphabet::reverse_map(alphabet::SymbolIndex::unchecked(enc->next(idx.value())));
        }
        if (!alphabet::is_mappable(line)) ++report.unsafe_line_symbols;
        if (line.is_control) ++control_line;
        if (options.keep_traces) report.line_trace.symbols.push_back(line);

        const auto code = encoder(line);
        ++report.symbols_line;
        scanner.push(code, on_comma);
        const auto decoded = decoder(code);
        if (decoded.status == codec::DecodeStatus::code_error) ++report.code_errors;
        if (decoded.status == codec::DecodeStatus::disparity_error) ++report.disparity_errors;

        Symbol8b10b out = decoded.symbol;
        if (dec) {
            if (alphabet::is_mappable(out)) {
                const auto idx = alphabet::map_symbol(out);
                out = alphabet::reverse_map(alphabet::SymbolIndex::unchecked(dec->next(idx.value())));
            } else {
                // Keep the keystream aligned with the transmitter.
                (void)dec->next(0);
            }
        }
        ++report.symbols_out;
        if (auto got = rx.push(out); got && (expected == nullptr || *got != *expected)) {
            ++report.frame_mismatches;
        }
    };

    std::vector<Symbol8b10b> period;
    if (pattern.idle_only()) {
        const std::size_t total = options.idle_symbols == 0 ? 1'000'000 : options.idle_symbols;
        while (report.symbols_in < total) {
            period.clear();
            (void)tx.emit_period(period);
            for (const auto s : period) {
                if (report.symbols_in == total) break;
                process(s, nullptr);
            }
        }
    } else {
        for (std::size_t i = 0; i < options.frames; ++i) {
            period.clear();
            const auto frame = tx.emit_period(period);
            const auto expected = frame->wire_bytes();
            for (const auto s : period) process(s, &expected);
        }
    }

    report.frames_sent = tx.frames_sent();
    report.frames_received = rx.frames_received();
    report.crc_errors = rx.crc_errors();
    if (report.symbols_in > 0) {
        const auto n = static_cast<double>(report.symbols_in);
        report.utilization = static_cast<double>(frame_symbols_in) / n;
        report.control_fraction_plain = static_cast<double>(control_plain) / n;
        report.control_fraction_line = static_cast<double>(control_line) / n;
    }
    return report;
}

}  // namespace pcscrypt::pcs
