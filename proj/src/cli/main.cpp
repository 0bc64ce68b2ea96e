#include <iostream>

#include "roadrisk/cli/cli.hpp"

int main(int argc, char** argv) { return roadrisk::cli::run_cli(argc, argv, std::cout, std::cerr); }
