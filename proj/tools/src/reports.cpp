#include "pcscrypt_tools/reports.hpp"

#include "json.hpp"
#include "pcscrypt_tools/manifest.hpp"

namespace pcscrypt::tools {

std::string link_report_json(const pcs::LinkReport& r) {
    nlohmann::ordered_json j;
    j["pattern"] = std::string(pcs::to_string(r.pattern.kind));
    j["target_utilization"] = r.pattern.target_utilization;
    j["frame_payload_len"] = r.pattern.frame_payload_len;
    j["payload_seed"] = r.pattern.payload_seed;
    j["encrypted"] = r.encrypted;
    j["frames_sent"] = r.frames_sent;
    j["frames_received"] = r.frames_received;
    j["crc_errors"] = r.crc_errors;
    j["frame_mismatches"] = r.frame_mismatches;
    j["code_errors"] = r.code_errors;
    j["disparity_errors"] = r.disparity_errors;
    j["aligned_commas"] = r.aligned_commas;
    j["misaligned_commas"] = r.misaligned_commas;
    j["unsafe_line_symbols"] = r.unsafe_line_symbols;
    j["symbols_in"] = r.symbols_in;
    j["symbols_line"] = r.symbols_line;
    j["symbols_out"] = r.symbols_out;
    j["utilization"] = r.utilization;
    j["control_fraction_plain"] = r.control_fraction_plain;
    j["control_fraction_line"] = r.control_fraction_line;
    j["config"] = r.config ? nlohmann::ordered_json::parse(config_echo_json(*r.config)) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string k_flag_csv(const std::vector<bool>& flags) {
    std::string out = "position,k\n";
    out.reserve(out.size() + flags.size() * 10);
    for (std::size_t i = 0; i < flags.size(); ++i) {
        out += std::to_string(i);
        out += flags[i] ? ",1\n" : ",0\n";
    }
    return out;
}

}  // namespace pcscrypt::tools
