#include "spdde/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spdde::run_cli(argc, argv, std::cout, std::cerr); }
