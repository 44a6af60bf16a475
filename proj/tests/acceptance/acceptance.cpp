// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pcscrypt/config.hpp"
#include "pcscrypt/ctr_stream.hpp"
#include "pcscrypt/ff3.hpp"
#include "pcscrypt/pcs_sim.hpp"
#include "pcscrypt/stat_analysis.hpp"
#include "pcscrypt/symbol_space.hpp"

using namespace pcscrypt;
using Clock = std::chrono::steady_clock;

namespace {

// Keys for the randomness battery come from this generator; the second key is
// the single permitted retry.
constexpr std::uint64_t kBatterySeed = 0x5EED2026;
constexpr std::uint64_t kRoundTripSeed = 0xF3F3;
constexpr std::uint64_t kToySeed = 0x70E;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds, double limit) {
    const bool in_time = seconds <= limit;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d %s: %s (%.2f s, limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str(), seconds, limit, in_time ? "" : " over time");
    std::fflush(stdout);
}

void run(int id, const std::string& name, double limit, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o, std::chrono::duration<double>(Clock::now() - t0).count(), limit);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fpe::CipherKey random_key(std::mt19937_64& rng) {
    fpe::CipherKey k;
    for (auto& b : k.key) b = static_cast<std::uint8_t>(rng());
    return k;
}

ctr::StreamCipherConfig link_config() {
    ctr::StreamCipherConfig cfg;
    cfg.key = fpe::CipherKey::from_hex("2b7e151628aed2a6abf7158809cf4f3c");
    return cfg;
}

std::vector<std::uint16_t> to_indices(const pcs::SymbolTrace& t, std::size_t limit = SIZE_MAX) {
    std::vector<std::uint16_t> out;
    const std::size_t n = std::min(limit, t.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(alphabet::map_symbol(t.symbols[i]).value());
    return out;
}

double k_fraction(const pcs::SymbolTrace& t, std::size_t n) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += t.symbols[i].is_control;
    return static_cast<double>(k) / static_cast<double>(n);
}

// ---- criterion 4: toy counter mode -------------------------------------

constexpr std::uint32_t kToyRadix = 5;
constexpr std::size_t kToyBlock = 2;

unsigned toy_prf(unsigned x) { return (13 * x + 4) % 25; }

class ToyPermutation final : public ctr::BlockPermutation {
public:
    std::uint32_t radix() const noexcept override { return kToyRadix; }
    std::size_t block_size() const noexcept override { return kToyBlock; }
    void permute(std::span<const ctr::Digit> in, std::span<ctr::Digit> out) const override {
        const unsigned y = toy_prf(in[0] * 5u + in[1]);
        out[0] = static_cast<ctr::Digit>(y / 5);
        out[1] = static_cast<ctr::Digit>(y % 5);
    }
};

// Brute force: enumerate the counter, expand F(counter) into base-5 digits,
// add each plaintext symbol modulo 5.
std::vector<int> toy_brute_force(const std::vector<int>& msg, int ctr0) {
    std::vector<int> out;
    int counter = ctr0;
    std::size_t i = 0;
    while (i < msg.size()) {
        const int f = static_cast<int>(toy_prf(static_cast<unsigned>(counter)));
        const int ks[2] = {f / 5, f % 5};
        for (int j = 0; j < 2 && i < msg.size(); ++j, ++i) out.push_back((msg[i] + ks[j]) % 5);
        counter = (counter + 1) % 25;
    }
    return out;
}

// ---- criterion 8 ---------------------------------------------------------

Outcome battery(const ctr::StreamCipherConfig& cfg) {
    constexpr std::size_t kFreq = 3'000'000;
    constexpr std::size_t kPairs = 15'000'000;
    const auto ctr = ctr::make_ctr(cfg);
    const std::size_t blocks = (2 * kPairs + cfg.blocksize - 1) / cfg.blocksize;
    const auto ks = ctr.keystream(ctr.initial_counter(), blocks);
    const std::span<const stats::Digit> all(ks);

    const auto freq = stats::frequency_test(all.first(kFreq));
    const auto serial = stats::serial_test(all.first(2 * kPairs), 2);
    const auto poker = stats::poker_test(all.first(kFreq));

    // 200 segments, runs up and runs down each; the pass proportion at 1 %
    // must clear 0.99 - 3 sqrt(0.99 * 0.01 / m).
    constexpr std::size_t kSegments = 200;
    std::size_t run_pass = 0;
    for (std::size_t s = 0; s < kSegments; ++s) {
        const auto r = stats::run_test(all.subspan(s * 5000, 5000));
        run_pass += r.up.passes(0.01);
        run_pass += r.down.passes(0.01);
    }
    const double m = 2.0 * kSegments;
    const double run_prop = static_cast<double>(run_pass) / m;
    const double run_min = 0.99 - 3.0 * std::sqrt(0.99 * 0.01 / m);

    const auto corr = stats::serial_correlation(all.first(25000 + 100000), 25000, 100000);

    const bool ok = freq.passes(0.05) && serial.passes(0.05) && poker.passes(0.01) && run_prop >= run_min &&
                    corr.fraction_in_bounds() >= 0.93;
    return {ok, fmt("frequency p=%.4f (n=%zu), serial2 p=%.4f (pairs=%zu), poker p=%.4f, run %zu/%zu >= %.4f, "
                    "correlation %.4f in bounds",
                    freq.p_value, freq.samples, serial.p_value, serial.samples, poker.p_value, run_pass,
                    static_cast<std::size_t>(m), run_min, corr.fraction_in_bounds())};
}

}  // namespace

int main() {
    std::printf("pcscrypt acceptance\n");

    run(1, "FF3 sample vectors", 1.0, [] {
        std::ifstream in(PCSCRYPT_TEST_DATA_DIR "/ff3_sample_vectors.txt");
        const auto vectors = fpe::read_ff3_vectors(in);
        std::size_t ok = 0;
        std::set<std::uint32_t> radices;
        for (const auto& v : vectors) {
            const auto r = fpe::check_vector(v);
            ok += r.encrypt_ok && r.decrypt_ok;
            radices.insert(v.radix);
        }
        const bool pass = !vectors.empty() && ok == vectors.size() && radices.count(10) && radices.count(26);
        return Outcome{pass, fmt("%zu/%zu vectors exact, radix 10 and 26 present", ok, vectors.size())};
    });

    run(2, "radix-267 round trip", 30.0, [] {
        std::mt19937_64 rng(kRoundTripSeed);
        const auto params = fpe::Ff3Params::for_radix(267);
        constexpr int kKeys = 20;
        constexpr int kPerKey = 500;
        std::size_t failures_rt = 0;
        std::size_t collisions = 0;
        for (int k = 0; k < kKeys; ++k) {
            const fpe::Ff3Cipher cipher(random_key(rng), params);
            std::map<std::size_t, std::map<std::vector<std::uint16_t>, std::vector<std::uint16_t>>> by_len;
            for (int i = 0; i < kPerKey; ++i) {
                const std::size_t len = 2 + rng() % 21;
                std::vector<std::uint16_t> x(len);
                for (auto& d : x) d = static_cast<std::uint16_t>(rng() % 267);
                const fpe::NumeralString pt(x, 267);
                const auto ct = cipher.encrypt(pt, fpe::Tweak{});
                if (cipher.decrypt(ct, fpe::Tweak{}) != pt) ++failures_rt;
                by_len[len][x] = std::vector<std::uint16_t>(ct.digits().begin(), ct.digits().end());
            }
            for (const auto& [len, m] : by_len) {
                std::set<std::vector<std::uint16_t>> outs;
                for (const auto& [x, y] : m) outs.insert(y);
                collisions += m.size() - outs.size();
            }
        }
        return Outcome{failures_rt == 0 && collisions == 0,
                       fmt("%d strings, %zu round-trip failures, %zu collisions", kKeys * kPerKey, failures_rt,
                           collisions)};
    });

    run(3, "parameter bounds", 1.0, [] {
        const auto p = fpe::Ff3Params::for_radix(267);
        const bool maxlen_ok = p.maxlen == 22;
        const bool b23_rejected = !fpe::validate_params({267, 2, 23}).ok();
        auto cfg = link_config();
        std::string accepted;
        bool bound_ok = true;
        for (std::size_t b = 15; b <= 23; ++b) {
            cfg.blocksize = b;
            const bool ok = ctr::validate_config(cfg).ok();
            if (ok) accepted += std::to_string(b) + " ";
            bound_ok = bound_ok && ok == (b >= 16 && b <= 22);
        }
        return Outcome{maxlen_ok && b23_rejected && bound_ok,
                       fmt("maxlen %zu, B=23 %s, accepted B: %s", p.maxlen, b23_rejected ? "rejected" : "accepted",
                           accepted.c_str())};
    });

    run(4, "toy counter-mode oracle", 1.0, [] {
        std::mt19937_64 rng(kToySeed);
        const auto perm = std::make_shared<ToyPermutation>();
        std::size_t mismatches = 0;
        std::size_t partial = 0;
        for (int t = 0; t < 1000; ++t) {
            const int ctr0 = static_cast<int>(rng() % 25);
            std::vector<int> msg(rng() % 64);
            std::vector<ctr::Digit> digits(msg.size());
            for (std::size_t i = 0; i < msg.size(); ++i) {
                msg[i] = static_cast<int>(rng() % 5);
                digits[i] = static_cast<ctr::Digit>(msg[i]);
            }
            partial += msg.size() % 2;
            const ctr::CtrMode mode(perm, ctr::CounterState(static_cast<fpe::uint128>(ctr0), kToyRadix, kToyBlock));
            const auto got = mode.encrypt(digits, 1);
            const auto want = toy_brute_force(msg, ctr0);
            bool same = got.size() == want.size();
            for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i] == want[i];
            mismatches += !same || mode.decrypt(got, 1) != digits;
        }
        return Outcome{mismatches == 0, fmt("1000 messages (%zu with partial final block), %zu mismatches", partial,
                                            mismatches)};
    });

    // Encrypted links shared by criteria 5, 6, 7, 9 and 10.
    std::map<pcs::PatternKind, pcs::LinkReport> links;
    run(5, "link integrity B/C/D", 120.0, [&] {
        std::string detail;
        bool ok = true;
        for (auto k : {pcs::PatternKind::B, pcs::PatternKind::C, pcs::PatternKind::D}) {
            pcs::LinkOptions o;
            o.frames = 1000;
            o.keep_traces = true;
            auto r = pcs::run_link(pcs::TrafficPattern::preset(k), link_config(), o);
            const bool good = r.frames_sent == 1000 && r.frames_received == r.frames_sent && r.crc_errors == 0 &&
                              r.frame_mismatches == 0 && r.code_errors == 0 && r.disparity_errors == 0 &&
                              r.misaligned_commas == 0 && r.symbols_out == r.symbols_in &&
                              r.symbols_line == r.symbols_in;
            ok = ok && good;
            detail += fmt("%s %zu/%zu frames crc=%zu code=%zu disp=%zu misaligned=%zu symbols %zu->%zu; ",
                          std::string(pcs::to_string(k)).c_str(), r.frames_received, r.frames_sent, r.crc_errors,
                          r.code_errors, r.disparity_errors, r.misaligned_commas, r.symbols_in, r.symbols_out);
            links.emplace(k, std::move(r));
        }
        return Outcome{ok, detail};
    });

    run(6, "utilization calibration", 60.0, [&] {
        const std::map<pcs::PatternKind, double> target = {
            {pcs::PatternKind::B, 0.102}, {pcs::PatternKind::C, 0.5}, {pcs::PatternKind::D, 0.91}};
        bool ok = links.size() == 3;
        std::string detail;
        for (const auto& [k, t] : target) {
            if (!links.count(k)) continue;
            const auto& r = links.at(k);
            const double u = pcs::measure_utilization(r.plain_trace);
            ok = ok && std::abs(u - t) <= 0.005 && r.symbols_in >= 1'000'000;
            detail += fmt("%s %.6f over %zu symbols; ", std::string(pcs::to_string(k)).c_str(), u, r.symbols_in);
        }
        return Outcome{ok, detail};
    });

    pcs::LinkReport idle_link;
    run(7, "encrypted symbol safety", 60.0, [&] {
        pcs::LinkOptions o;
        o.idle_symbols = 1'000'000;
        o.keep_traces = true;
        idle_link = pcs::run_link(pcs::TrafficPattern::preset(pcs::PatternKind::A), link_config(), o);
        std::size_t symbols = 0;
        std::size_t unsafe = 0;
        std::size_t misaligned = 0;
        std::size_t code = 0;
        std::vector<const pcs::LinkReport*> all = {&idle_link};
        for (const auto& [k, r] : links) all.push_back(&r);
        for (const auto* r : all) {
            symbols += r->line_trace.size();
            for (const auto s : r->line_trace.symbols) unsafe += !alphabet::is_mappable(s);
            unsafe += r->unsafe_line_symbols;
            misaligned += r->misaligned_commas;
            code += r->code_errors;
        }
        return Outcome{links.size() == 3 && symbols >= 1'000'000 && unsafe == 0 && misaligned == 0 && code == 0,
                       fmt("%zu encrypted symbols over A-D, %zu K28.7/invalid, %zu misaligned commas", symbols,
                           unsafe, misaligned)};
    });

    run(8, "keystream randomness", 600.0, [] {
        std::mt19937_64 rng(kBatterySeed);
        ctr::StreamCipherConfig cfg;
        cfg.key = random_key(rng);
        auto first = battery(cfg);
        if (first.pass) return Outcome{true, "first key: " + first.detail};
        cfg.key = random_key(rng);
        auto retry = battery(cfg);
        return Outcome{retry.pass, "first key failed (" + first.detail + "); retry: " + retry.detail};
    });

    run(9, "entropy", 900.0, [&] {
        constexpr std::size_t kSe1 = 2'670'000;
        constexpr std::size_t kSe2 = 14'260'000;
        constexpr std::size_t kSe3 = 50'000'000;
        const double log2_radix = std::log2(267.0);

        pcs::LinkOptions o;
        o.idle_symbols = 2 * kSe2;
        o.keep_traces = true;
        const auto enc_a = pcs::run_link(pcs::TrafficPattern::preset(pcs::PatternKind::A), link_config(), o);
        const auto enc_idx = to_indices(enc_a.line_trace);
        const auto plain_idx = to_indices(enc_a.plain_trace, kSe1);
        const double se1_enc = stats::shannon_entropy(std::span(enc_idx).first(kSe1), 1).se_bits_per_symbol;
        const auto se2 = stats::shannon_entropy(enc_idx, 2);
        const double se1_a = stats::shannon_entropy(plain_idx, 1).se_bits_per_symbol;

        double se1_plain[3] = {};
        int i = 0;
        for (auto k : {pcs::PatternKind::B, pcs::PatternKind::C, pcs::PatternKind::D}) {
            if (links.count(k)) se1_plain[i] = stats::shannon_entropy(to_indices(links.at(k).plain_trace), 1).se_bits_per_symbol;
            ++i;
        }

        // Reported at four decimals; values above log2(267) are impossible.
        const double se1_r = std::round(se1_enc * 1e4) / 1e4;
        const double se2_r = std::round(se2.se_bits_per_symbol * 1e4) / 1e4;
        const bool se1_ok = se1_r >= 8.05 && se1_r <= 8.0606 && se1_enc <= log2_radix;
        const bool se2_ok = se2.sample_count >= kSe2 && se2_r >= 8.0 && se2_r <= 8.0606;
        const bool order_ok = links.size() == 3 && se1_a < se1_plain[0] && se1_plain[0] < se1_plain[1] &&
                              se1_plain[1] < se1_plain[2] && se1_plain[2] < se1_enc;
        const bool unenc_ok = std::abs(se1_a - 1.0) <= 1e-9;

        // n = 3: encrypted idle against plain pattern D, same tuple count.
        stats::EntropyAccumulator enc3(3);
        stats::EntropyAccumulator d3(3);
        {
            auto stream = ctr::SymbolStream::from_config(link_config(), ctr::Direction::encrypt);
            const std::uint16_t idle[2] = {alphabet::map_symbol(codec::symbols::K28_5).value(),
                                           alphabet::map_symbol(codec::symbols::D16_2).value()};
            std::vector<std::uint16_t> p(1 << 20);
            std::vector<std::uint16_t> c(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) p[j] = idle[j % 2];
            while (enc3.tuples() < kSe3) {
                stream.process(p, c);
                const std::size_t need = 3 * (kSe3 - enc3.tuples());
                enc3.push(std::span(c).first(std::min(need, c.size())));
            }
            pcs::TxPcs tx(pcs::TrafficPattern::preset(pcs::PatternKind::D));
            std::vector<codec::Symbol8b10b> buf;
            std::vector<std::uint16_t> idx;
            while (d3.tuples() < kSe3) {
                buf.clear();
                idx.clear();
                for (int f = 0; f < 64; ++f) (void)tx.emit_period(buf);
                for (const auto s : buf) idx.push_back(alphabet::map_symbol(s).value());
                const std::size_t need = 3 * (kSe3 - d3.tuples());
                d3.push(std::span(idx).first(std::min(need, idx.size())));
            }
        }
        const auto se3_enc = enc3.result();
        const auto se3_d = d3.result();
        const bool se3_ok = se3_enc.sample_count >= kSe3 && se3_enc.se_bits_per_symbol > se3_d.se_bits_per_symbol;

        return Outcome{se1_ok && se2_ok && order_ok && unenc_ok && se3_ok,
                       fmt("SE1(encA)=%.6f (%zu samples), SE2(encA)=%.6f (%zu samples), SE1 A/B/C/D = "
                           "%.9f/%.4f/%.4f/%.4f, SE3(encA)=%.4f vs SE3(D)=%.4f (%zu samples)",
                           se1_enc, kSe1, se2.se_bits_per_symbol, se2.sample_count, se1_a, se1_plain[0],
                           se1_plain[1], se1_plain[2], se3_enc.se_bits_per_symbol, se3_d.se_bits_per_symbol,
                           se3_enc.sample_count)};
    });

    run(10, "K-flag obfuscation", 60.0, [&] {
        constexpr std::size_t n = 1'000'000;
        const double target = 11.0 / 267.0;
        if (idle_link.line_trace.size() < n || !links.count(pcs::PatternKind::D)) {
            return Outcome{false, "traces from criteria 5 and 7 unavailable"};
        }
        const auto& d = links.at(pcs::PatternKind::D);
        if (d.line_trace.size() < n) return Outcome{false, "pattern D trace shorter than 10^6"};
        const double enc_a = k_fraction(idle_link.line_trace, n);
        const double enc_d = k_fraction(d.line_trace, n);
        const double plain_a = k_fraction(idle_link.plain_trace, n);
        const double plain_d = k_fraction(d.plain_trace, n);
        const bool ok = std::abs(enc_a - target) <= 0.005 && std::abs(enc_d - target) <= 0.005 && plain_a == 0.5 &&
                        plain_d < 0.1;
        return Outcome{ok, fmt("encrypted A %.5f, encrypted D %.5f (11/267 = %.5f), plain A %.5f, plain D %.5f",
                               enc_a, enc_d, target, plain_a, plain_d)};
    });

    run(11, "hardware figures", 1.0, [] {
        return Outcome{true, "NA: FPGA resources, clock and latency are out of scope; symbol conservation in "
                             "criterion 5 covers throughput"};
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
