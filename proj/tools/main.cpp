#include <iostream>

#include "modsi/cli.hpp"

int main(int argc, char** argv) { return modsi::cli::run(argc, argv, std::cout, std::cerr); }
