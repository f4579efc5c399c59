#include "memone/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return memone::cli::run(argc, argv, std::cout, std::cerr); }
