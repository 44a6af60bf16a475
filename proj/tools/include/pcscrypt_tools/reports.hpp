#pragma once

#include <string>
#include <vector>

#include "pcscrypt/pcs_sim.hpp"

namespace pcscrypt::tools {

/// LinkReport counters, pattern and config echo as a JSON document.
[[nodiscard]] std::string link_report_json(const pcs::LinkReport& report);

/// "position,k" rows for a K-flag trace.
[[nodiscard]] std::string k_flag_csv(const std::vector<bool>& flags);

}  // namespace pcscrypt::tools
