#include <iostream>

#include "pcscrypt_tools/cli.hpp"

int main(int argc, char** argv) { return pcscrypt::tools::run_cli(argc, argv, std::cout, std::cerr); }
