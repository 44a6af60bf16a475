#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcscrypt/ctr_stream.hpp"

namespace pcscrypt::tools {

/// Record of one tool run. Everything except `timestamp` is a function of
/// the command line and input files.
struct RunManifest {
    std::string command;
    std::vector<std::string> arguments;
    std::optional<ctr::StreamCipherConfig> config;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::map<std::string, std::string> seeds;
    std::string tool_version;
    std::string timestamp;
};

/// Config fields without the key; the key appears only as key_fingerprint.
[[nodiscard]] std::string config_echo_json(const ctr::StreamCipherConfig& cfg);

[[nodiscard]] std::string to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// First 16 hex digits of SHA-256(key).
[[nodiscard]] std::string key_fingerprint(const fpe::CipherKey& key);

/// SHA-256 over key, tweak and the decimal init_counter, hex encoded.
[[nodiscard]] std::string usage_digest(const ctr::StreamCipherConfig& cfg);

/// `<config>.used`, the ledger of (key, tweak, init_counter) digests.
[[nodiscard]] std::filesystem::path usage_ledger_path(const std::filesystem::path& config_path);
[[nodiscard]] bool digest_recorded(const std::filesystem::path& ledger, const std::string& digest);
void record_digest(const std::filesystem::path& ledger, const std::string& digest);

/// ISO 8601 UTC, seconds resolution.
[[nodiscard]] std::string utc_timestamp();

}  // namespace pcscrypt::tools
