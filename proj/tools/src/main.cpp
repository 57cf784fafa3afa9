#include <iostream>

#include "memcap_cli/cli.hpp"

int main(int argc, char** argv) { return memcap::cli::run(argc, argv, std::cout, std::cerr); }
