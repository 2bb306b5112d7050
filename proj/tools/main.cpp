#include <iostream>

#include "quagd/cli.hpp"

int main(int argc, char** argv) { return quagd::cli::run_main(argc, argv, std::cout, std::cerr); }
