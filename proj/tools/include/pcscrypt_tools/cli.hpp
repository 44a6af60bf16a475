#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcscrypt::tools {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_runtime = 2,
    exit_test_failure = 3,
};

/// Entry point of the `pcscrypt` tool. `argv[0]` is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with `args` excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

[[nodiscard]] std::string version();

}  // namespace pcscrypt::tools
