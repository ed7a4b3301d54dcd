#include <iostream>

#include "coda_cli/cli.hpp"

int main(int argc, char** argv) { return coda::cli::run(argc, argv, std::cout, std::cerr); }
