#include "pcscrypt/error.hpp"

namespace pcscrypt {

std::string ValidationReport::summary() const {
    if (violations.empty()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

}  // namespace pcscrypt
