#include <iostream>

#include "ppocp/cli.hpp"

int main(int argc, char** argv) { return ppocp::cli::run(argc, argv, std::cout, std::cerr); }
