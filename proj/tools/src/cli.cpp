#include "pcscrypt_tools/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcscrypt/config.hpp"
#include "pcscrypt/ctr_stream.hpp"
#include "pcscrypt/ff3.hpp"
#include "pcscrypt/pcs_sim.hpp"
#include "pcscrypt/stat_analysis.hpp"
#include "pcscrypt/symbol_io.hpp"
#include "pcscrypt/symbol_space.hpp"
#include "pcscrypt_tools/manifest.hpp"
#include "pcscrypt_tools/reports.hpp"

namespace pcscrypt::tools {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Context {
    std::vector<std::string> arguments;
    std::ostream& out;
    std::ostream& err;
};

struct CryptOptions {
    std::string in;
    std::string cfg;
    std::string out;
    std::string manifest;
    bool fresh = false;
    unsigned threads = 0;
};

struct SimulateOptions {
    std::string pattern = "A";
    std::size_t frames = 100;
    std::size_t symbols = 0;
    std::string encrypt = "off";
    std::string cfg;
    std::string rx_cfg;
    std::string report;
    std::string trace;
    std::string plain_trace;
    std::string kflags;
    std::string manifest;
    std::uint64_t seed = 1;
    std::size_t payload_len = 1024;
    double utilization = -1.0;
};

struct AnalyzeOptions {
    std::string tests = "frequency,serial2,poker,run,correlation";
    std::string entropy;
    std::string in;
    std::string out;
    std::string csv;
    std::string entropy_csv;
    std::string label;
    std::string manifest;
    std::size_t window = 25000;
    std::size_t max_shift = 100000;
    double alpha = 0.01;
    unsigned threads = 0;
};

struct KeystreamOptions {
    std::string cfg;
    std::size_t blocks = 1;
    std::string out;
    std::string manifest;
    unsigned threads = 0;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

fs::path manifest_path(const std::string& explicit_path, const fs::path& primary_output) {
    if (!explicit_path.empty()) return explicit_path;
    auto p = primary_output;
    p += ".manifest.json";
    return p;
}

RunManifest base_manifest(const Context& ctx, std::string command) {
    RunManifest m;
    m.command = std::move(command);
    m.arguments = ctx.arguments;
    m.tool_version = version();
    m.timestamp = utc_timestamp();
    return m;
}

ctr::StreamCipherConfig load_validated(const fs::path& path) {
    auto cfg = config::load_config(path);
    const auto report = ctr::validate_config(cfg);
    if (!report.ok()) {
        std::string msg = "configuration " + path.string() + " rejected:";
        for (const auto& v : report.violations) msg += "\n  - " + v;
        throw ConfigError(msg);
    }
    return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_crypt(const Context& ctx, const CryptOptions& o, ctr::Direction dir) {
    const auto cfg = load_validated(o.cfg);
    const auto ledger = usage_ledger_path(o.cfg);
    const auto digest = usage_digest(cfg);
    if (dir == ctr::Direction::encrypt && o.fresh && digest_recorded(ledger, digest)) {
        throw ConfigError("key/tweak/init_counter in " + o.cfg +
                          " was already used for encryption; change init_counter or the key");
    }

    const auto file = io::read_symbols(fs::path(o.in));
    std::vector<std::uint16_t> idx(file.symbols.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        try {
            idx[i] = alphabet::map_symbol(file.symbols[i]).value();
        } catch (const ExcludedSymbolError&) {
            throw ExcludedSymbolError(o.in + ": " + file.where(i) + ": /K28.7/ is excluded from the alphabet");
        }
    }
    const auto ctr = ctr::make_ctr(cfg);
    const auto res = dir == ctr::Direction::encrypt ? ctr.encrypt(idx, o.threads) : ctr.decrypt(idx, o.threads);
    std::vector<codec::Symbol8b10b> symbols(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) symbols[i] = alphabet::reverse_map(alphabet::SymbolIndex::unchecked(res[i]));
    io::write_symbols(fs::path(o.out), symbols);

    if (dir == ctr::Direction::encrypt && o.fresh) record_digest(ledger, digest);

    auto m = base_manifest(ctx, dir == ctr::Direction::encrypt ? "encrypt" : "decrypt");
    m.config = cfg;
    m.inputs = {{"symbols", o.in}, {"config", o.cfg}};
    m.outputs = {{"symbols", o.out}};
    write_manifest(manifest_path(o.manifest, o.out), m);
    ctx.out << (dir == ctr::Direction::encrypt ? "encrypted " : "decrypted ") << res.size() << " symbols -> "
            << o.out << '\n';
    return exit_ok;
}

int cmd_simulate(const Context& ctx, const SimulateOptions& o) {
    const auto kind = pcs::parse_pattern_kind(o.pattern);
    pcs::TrafficPattern pattern;
    if (kind == pcs::PatternKind::custom) {
        if (o.utilization < 0.0) throw ConfigError("--pattern custom needs --utilization");
        pattern.kind = kind;
        pattern.target_utilization = o.utilization;
        pattern.payload_seed = o.seed;
    } else {
        pattern = pcs::TrafficPattern::preset(kind, o.seed);
        if (o.utilization >= 0.0) throw ConfigError("--utilization applies only to --pattern custom");
    }
    pattern.frame_payload_len = o.payload_len;

    if (o.encrypt != "on" && o.encrypt != "off") throw ConfigError("--encrypt takes on or off");
    std::optional<ctr::StreamCipherConfig> cfg;
    pcs::LinkOptions link;
    link.frames = o.frames;
    link.idle_symbols = o.symbols;
    link.keep_traces = !o.trace.empty() || !o.plain_trace.empty() || !o.kflags.empty();
    if (o.encrypt == "on") {
        if (o.cfg.empty()) throw ConfigError("--encrypt on needs --cfg");
        cfg = load_validated(o.cfg);
        if (!o.rx_cfg.empty()) link.rx_config = load_validated(o.rx_cfg);
    }

    const auto report = pcs::run_link(pattern, cfg, link);
    const auto text = link_report_json(report);
    auto m = base_manifest(ctx, "simulate");
    m.config = cfg;
    if (!o.cfg.empty()) m.inputs["config"] = o.cfg;
    if (!o.rx_cfg.empty()) m.inputs["rx_config"] = o.rx_cfg;
    m.seeds["payload_seed"] = std::to_string(o.seed);

    if (!o.report.empty()) {
        write_file(o.report, text);
        m.outputs["report"] = o.report;
    } else {
        ctx.out << text;
    }
    if (!o.trace.empty()) {
        io::write_symbols(fs::path(o.trace), report.line_trace.symbols);
        m.outputs["trace"] = o.trace;
    }
    if (!o.plain_trace.empty()) {
        io::write_symbols(fs::path(o.plain_trace), report.plain_trace.symbols);
        m.outputs["plain_trace"] = o.plain_trace;
    }
    if (!o.kflags.empty()) {
        write_file(o.kflags, k_flag_csv(report.line_trace.k_flags()));
        m.outputs["kflags"] = o.kflags;
    }
    if (!o.manifest.empty() || !o.report.empty()) write_manifest(manifest_path(o.manifest, o.report), m);
    return exit_ok;
}

json chi_json(const stats::ChiSquareResult& r, double alpha) {
    json j;
    j["name"] = r.test;
    j["status"] = r.passes(alpha) ? "pass" : "fail";
    j["statistic"] = r.statistic;
    j["df"] = r.degrees_of_freedom;
    j["p_value"] = r.p_value;
    j["pass_at"] = r.pass_at();
    j["samples"] = r.samples;
    j["categories"] = r.categories;
    return j;
}

json skipped_json(const std::string& name, const std::string& reason) {
    json j;
    j["name"] = name;
    j["status"] = "skipped";
    j["reason"] = reason;
    return j;
}

int cmd_analyze(const Context& ctx, const AnalyzeOptions& o) {
    static const std::vector<std::string> kKnown = {"frequency", "serial2", "serial3", "poker", "run", "correlation"};
    const auto tests = split_list(o.tests);
    for (const auto& t : tests) {
        if (std::find(kKnown.begin(), kKnown.end(), t) == kKnown.end()) {
            throw ConfigError("unknown test '" + t + "' (known: frequency, serial2, serial3, poker, run, correlation)");
        }
    }
    std::vector<unsigned> orders;
    std::string entropy = o.entropy;
    if (entropy.rfind("n=", 0) == 0) entropy = entropy.substr(2);
    for (const auto& item : split_list(entropy)) {
        unsigned n = 0;
        try {
            n = static_cast<unsigned>(std::stoul(item));
        } catch (const std::exception&) {
            throw ConfigError("--entropy expects a list such as n=1,2,3");
        }
        if (n == 0 || n > 3) throw ConfigError("entropy tuple size must be 1, 2 or 3");
        orders.push_back(n);
    }
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");

    const auto seq = io::read_index_trace(fs::path(o.in));
    json doc;
    doc["input"] = o.in;
    doc["label"] = o.label;
    doc["symbols"] = seq.size();
    doc["alpha"] = o.alpha;
    json results = json::array();
    bool any_fail = false;

    for (const auto& t : tests) {
        try {
            if (t == "frequency") {
                results.push_back(chi_json(stats::frequency_test(seq), o.alpha));
            } else if (t == "serial2" || t == "serial3") {
                results.push_back(chi_json(stats::serial_test(seq, t == "serial2" ? 2 : 3), o.alpha));
            } else if (t == "poker") {
                results.push_back(chi_json(stats::poker_test(seq), o.alpha));
            } else if (t == "run") {
                const auto r = stats::run_test(seq);
                results.push_back(chi_json(r.up, o.alpha));
                results.push_back(chi_json(r.down, o.alpha));
            } else if (t == "correlation") {
                const auto r = stats::serial_correlation(seq, o.window, o.max_shift, o.threads);
                constexpr double kMinInBounds = 0.93;
                json j;
                j["name"] = "correlation";
                j["status"] = r.fraction_in_bounds() >= kMinInBounds ? "pass" : "fail";
                j["window"] = r.window;
                j["max_shift"] = o.max_shift;
                j["mean"] = r.mean;
                j["sigma"] = r.sigma;
                j["lower"] = r.lower;
                j["upper"] = r.upper;
                j["fraction_in_bounds"] = r.fraction_in_bounds();
                j["out_of_bounds"] = r.out_of_bounds.size();
                results.push_back(j);
            }
        } catch (const InsufficientDataError& e) {
            results.push_back(skipped_json(t, e.what()));
        }
    }
    for (const auto& r : results) any_fail = any_fail || r["status"] == "fail";
    doc["tests"] = results;

    json ent = json::array();
    std::string ent_csv = "pattern,n,samples,SE\n";
    for (const auto n : orders) {
        const auto e = stats::shannon_entropy(seq, n);
        json j;
        j["n"] = e.n;
        j["samples"] = e.sample_count;
        j["se"] = e.se_bits_per_symbol;
        ent.push_back(j);
        std::ostringstream row;
        row.precision(10);
        row << o.label << ',' << e.n << ',' << e.sample_count << ',' << e.se_bits_per_symbol << '\n';
        ent_csv += row.str();
    }
    doc["entropy"] = ent;

    auto m = base_manifest(ctx, "analyze");
    m.inputs["trace"] = o.in;
    const auto text = doc.dump(2) + "\n";
    if (!o.out.empty()) {
        write_file(o.out, text);
        m.outputs["results"] = o.out;
    } else {
        ctx.out << text;
    }
    if (!o.csv.empty()) {
        const auto counts = stats::histogram(seq);
        std::string csv = "index,count\n";
        for (std::size_t i = 0; i < counts.size(); ++i) csv += std::to_string(i) + "," + std::to_string(counts[i]) + "\n";
        write_file(o.csv, csv);
        m.outputs["histogram"] = o.csv;
    }
    if (!o.entropy_csv.empty()) {
        write_file(o.entropy_csv, ent_csv);
        m.outputs["entropy"] = o.entropy_csv;
    }
    if (!o.manifest.empty() || !o.out.empty()) write_manifest(manifest_path(o.manifest, o.out), m);
    return any_fail ? exit_test_failure : exit_ok;
}

int cmd_keystream(const Context& ctx, const KeystreamOptions& o) {
    const auto cfg = load_validated(o.cfg);
    const auto budget = ctr::block_budget(cfg.radix, cfg.blocksize);
    if (o.blocks > budget) {
        throw BudgetExceededError("--blocks " + std::to_string(o.blocks) + " exceeds the budget of " +
                                  fpe::to_decimal(budget) + " blocks");
    }
    const auto ctr = ctr::make_ctr(cfg);
    const auto ks = ctr.keystream(ctr.initial_counter(), o.blocks, o.threads);
    const fs::path out(o.out);
    if (io::format_for(out) == io::SymbolFormat::index) {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write " + o.out);
        io::write_indices(f, ks);
    } else {
        std::vector<codec::Symbol8b10b> symbols(ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) symbols[i] = alphabet::reverse_map(alphabet::SymbolIndex::unchecked(ks[i]));
        io::write_symbols(out, symbols);
    }
    auto m = base_manifest(ctx, "keystream");
    m.config = cfg;
    m.inputs["config"] = o.cfg;
    m.outputs["keystream"] = o.out;
    write_manifest(manifest_path(o.manifest, out), m);
    ctx.out << "wrote " << ks.size() << " keystream symbols (" << o.blocks << " blocks) -> " << o.out << '\n';
    return exit_ok;
}

int cmd_dump_alphabet(const Context& ctx, const std::string& out_path) {
    std::string csv = "symbol,index\n";
    for (std::uint32_t i = 0; i < alphabet::kRadix; ++i) {
        csv += codec::to_string(alphabet::reverse_map(i)) + "," + std::to_string(i) + "\n";
    }
    if (out_path.empty()) {
        ctx.out << csv;
    } else {
        write_file(out_path, csv);
    }
    return exit_ok;
}

int cmd_vectors(const Context& ctx, const std::string& path, const std::string& out_path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    const auto vectors = fpe::read_ff3_vectors(in);
    if (vectors.empty()) throw FormatError(path + " holds no sample vectors");
    json rows = json::array();
    std::size_t failures = 0;
    for (const auto& v : vectors) {
        const auto r = fpe::check_vector(v);
        const bool ok = r.encrypt_ok && r.decrypt_ok;
        if (!ok) ++failures;
        ctx.out << (ok ? "PASS " : "FAIL ") << v.label << " radix " << v.radix << " key bits " << 8 * v.key.size()
                << '\n';
        json j;
        j["label"] = v.label;
        j["radix"] = v.radix;
        j["key_bits"] = 8 * v.key.size();
        j["encrypt_ok"] = r.encrypt_ok;
        j["decrypt_ok"] = r.decrypt_ok;
        rows.push_back(j);
    }
    ctx.out << vectors.size() - failures << "/" << vectors.size() << " vectors pass\n";
    if (!out_path.empty()) write_file(out_path, rows.dump(2) + "\n");
    return failures == 0 ? exit_ok : exit_test_failure;
}

bool is_validation_error(const Error& e) {
    return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
           dynamic_cast<const FormatError*>(&e) || dynamic_cast<const InvalidSymbolError*>(&e) ||
           dynamic_cast<const ExcludedSymbolError*>(&e) || dynamic_cast<const MalformedInputError*>(&e) ||
           dynamic_cast<const RangeError*>(&e);
}

std::string formats_json() {
    json j;
    j["version"] = version();
    j["symbol_files"] = {
        {".sym", "text; one Dx.y or Kx.y per line; '#' comments"},
        {".symb", "binary; 'S10B', version byte 1, u64 little-endian count, then per symbol byte0 bit0 = K flag, "
                  "byte1 = value"},
        {".idx", "text; one alphabet index 0..266 per line; '#' comments"},
    };
    j["config_keys"] = {
        {"key_hex", "required; 32 hex digits (AES-128)"},
        {"tweak_hex", "16 hex digits; default 0000000000000000"},
        {"radix", "default 267"},
        {"blocksize", "default 22"},
        {"init_counter", "decimal or 0x hex; default 0"},
        {"bits_per_symbol", "default 8"},
    };
    j["outputs"] = {
        {"link_report", "JSON"},
        {"analysis", "JSON"},
        {"histogram", "CSV index,count"},
        {"entropy", "CSV pattern,n,samples,SE"},
        {"kflags", "CSV position,k"},
        {"alphabet", "CSV symbol,index"},
        {"manifest", "JSON"},
    };
    j["exit_codes"] = {{"0", "success"}, {"1", "validation error"}, {"2", "runtime error"}, {"3", "test failure"}};
    return j.dump(2) + "\n";
}

}  // namespace

std::string version() { return PCSCRYPT_VERSION; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Format-preserving FF3 counter-mode encryption of 8b/10b symbol streams", "pcscrypt"};
    app.set_version_flag("--version", version());
    bool formats = false;
    app.add_flag("--formats", formats, "Describe file formats and exit codes as JSON");
    app.require_subcommand(0, 1);

    CryptOptions enc_o;
    CryptOptions dec_o;
    auto add_crypt = [&](const char* name, const char* help, CryptOptions& o) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--in", o.in, "Input symbol file (.sym, .symb, .idx)")->required();
        sub->add_option("--cfg", o.cfg, "Stream cipher config")->required();
        sub->add_option("--out", o.out, "Output symbol file")->required();
        sub->add_option("--manifest", o.manifest, "Manifest path (default <out>.manifest.json)");
        sub->add_option("--threads", o.threads, "Keystream workers (0 = all cores)");
        return sub;
    };
    auto* enc = add_crypt("encrypt", "Encrypt a symbol file", enc_o);
    enc->add_flag("--fresh", enc_o.fresh, "Refuse a key/init_counter pair already used with this config");
    auto* dec = add_crypt("decrypt", "Decrypt a symbol file", dec_o);

    SimulateOptions sim_o;
    auto* sim = app.add_subcommand("simulate", "Run the PCS link simulation");
    sim->add_option("--pattern", sim_o.pattern, "Traffic pattern A, B, C, D or custom")->capture_default_str();
    sim->add_option("--frames", sim_o.frames, "Frames to send (framed patterns)")->capture_default_str();
    sim->add_option("--symbols", sim_o.symbols, "Symbols to send for pattern A (0 = 1000000)");
    sim->add_option("--encrypt", sim_o.encrypt, "on or off")->capture_default_str();
    sim->add_option("--cfg", sim_o.cfg, "Stream cipher config (needed with --encrypt on)");
    sim->add_option("--rx-cfg", sim_o.rx_cfg, "Receiver config when it differs from the transmitter's");
    sim->add_option("--report", sim_o.report, "LinkReport JSON output (default stdout)");
    sim->add_option("--trace", sim_o.trace, "Line symbol trace (.sym, .symb, .idx)");
    sim->add_option("--plain-trace", sim_o.plain_trace, "TX PCS symbol trace before encryption");
    sim->add_option("--kflags", sim_o.kflags, "K-flag trace of the line symbols as CSV");
    sim->add_option("--manifest", sim_o.manifest, "Manifest path (default <report>.manifest.json)");
    sim->add_option("--seed", sim_o.seed, "Payload generator seed")->capture_default_str();
    sim->add_option("--payload-len", sim_o.payload_len, "Payload bytes per frame")->capture_default_str();
    sim->add_option("--utilization", sim_o.utilization, "Target utilization for --pattern custom");

    AnalyzeOptions an_o;
    auto* an = app.add_subcommand("analyze", "Randomness battery and entropy of a symbol trace");
    an->add_option("--in", an_o.in, "Trace (.sym, .symb, .idx)")->required();
    an->add_option("--tests", an_o.tests, "Comma list of frequency, serial2, serial3, poker, run, correlation")
        ->capture_default_str();
    an->add_option("--entropy", an_o.entropy, "Tuple sizes, e.g. n=1,2,3");
    an->add_option("--out", an_o.out, "Results JSON (default stdout)");
    an->add_option("--csv", an_o.csv, "Symbol histogram CSV");
    an->add_option("--entropy-csv", an_o.entropy_csv, "Entropy table CSV");
    an->add_option("--label", an_o.label, "Pattern label for the entropy table");
    an->add_option("--window", an_o.window, "Serial correlation window")->capture_default_str();
    an->add_option("--max-shift", an_o.max_shift, "Largest serial correlation shift")->capture_default_str();
    an->add_option("--alpha", an_o.alpha, "Significance level for pass/fail")->capture_default_str();
    an->add_option("--threads", an_o.threads, "Correlation workers (0 = all cores)");
    an->add_option("--manifest", an_o.manifest, "Manifest path (default <out>.manifest.json)");

    KeystreamOptions ks_o;
    auto* ks = app.add_subcommand("keystream", "Dump keystream symbols");
    ks->add_option("--cfg", ks_o.cfg, "Stream cipher config")->required();
    ks->add_option("--blocks", ks_o.blocks, "Keystream blocks")->required();
    ks->add_option("--out", ks_o.out, "Output (.idx for indices, .sym/.symb for symbols)")->required();
    ks->add_option("--manifest", ks_o.manifest, "Manifest path (default <out>.manifest.json)");
    ks->add_option("--threads", ks_o.threads, "Workers (0 = all cores)");

    std::string alphabet_out;
    auto* alpha = app.add_subcommand("dump-alphabet", "Print the 267-entry symbol/index table as CSV");
    alpha->add_option("--out", alphabet_out, "CSV output (default stdout)");

    std::string vectors_in;
    std::string vectors_out;
    auto* vec = app.add_subcommand("vectors", "Check FF3 sample vectors");
    vec->add_option("--ff3", vectors_in, "Sample vector file")->required();
    vec->add_option("--out", vectors_out, "Per-vector JSON results");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_validation;
    }

    Context ctx{std::vector<std::string>(argv + 1, argv + argc), out, err};
    try {
        if (formats) {
            out << formats_json();
            return exit_ok;
        }
        if (enc->parsed()) return cmd_crypt(ctx, enc_o, ctr::Direction::encrypt);
        if (dec->parsed()) return cmd_crypt(ctx, dec_o, ctr::Direction::decrypt);
        if (sim->parsed()) return cmd_simulate(ctx, sim_o);
        if (an->parsed()) return cmd_analyze(ctx, an_o);
        if (ks->parsed()) return cmd_keystream(ctx, ks_o);
        if (alpha->parsed()) return cmd_dump_alphabet(ctx, alphabet_out);
        if (vec->parsed()) return cmd_vectors(ctx, vectors_in, vectors_out);
        out << app.help();
        return exit_ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_validation_error(e) ? exit_validation : exit_runtime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pcscrypt");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pcscrypt::tools
