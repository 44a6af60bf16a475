#include "pcscrypt_tools/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "pcscrypt/config.hpp"
#include "pcscrypt/error.hpp"

namespace pcscrypt::tools {

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 failed");
    }
    return config::to_hex(std::span<const std::uint8_t>(md, len));
}

nlohmann::ordered_json config_echo(const ctr::StreamCipherConfig& cfg) {
    nlohmann::ordered_json j;
    j["radix"] = cfg.radix;
    j["blocksize"] = cfg.blocksize;
    j["init_counter"] = fpe::to_decimal(cfg.init_counter);
    j["bits_per_symbol"] = cfg.bits_per_symbol;
    j["tweak_hex"] = config::to_hex(cfg.key.tweak);
    j["key_fingerprint"] = key_fingerprint(cfg.key);
    return j;
}

}  // namespace

std::string config_echo_json(const ctr::StreamCipherConfig& cfg) { return config_echo(cfg).dump(); }

std::string to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["arguments"] = m.arguments;
    j["config"] = m.config ? config_echo(*m.config) : nlohmann::ordered_json(nullptr);
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["seeds"] = m.seeds;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write manifest " + path.string());
    out << to_json(manifest);
}

std::string key_fingerprint(const fpe::CipherKey& key) {
    return sha256_hex(std::string(key.key.begin(), key.key.end())).substr(0, 16);
}

std::string usage_digest(const ctr::StreamCipherConfig& cfg) {
    std::string material(cfg.key.key.begin(), cfg.key.key.end());
    material.append(cfg.key.tweak.begin(), cfg.key.tweak.end());
    material += fpe::to_decimal(cfg.init_counter);
    return sha256_hex(material);
}

std::filesystem::path usage_ledger_path(const std::filesystem::path& config_path) {
    auto p = config_path;
    p += ".used";
    return p;
}

bool digest_recorded(const std::filesystem::path& ledger, const std::string& digest) {
    std::ifstream in(ledger);
    std::string line;
    while (std::getline(in, line)) {
        if (line == digest) return true;
    }
    return false;
}

void record_digest(const std::filesystem::path& ledger, const std::string& digest) {
    std::ofstream out(ledger, std::ios::app);
    if (!out) throw Error("cannot append to " + ledger.string());
    out << digest << '\n';
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

}  // namespace pcscrypt::tools
