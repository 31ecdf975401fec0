#include <iostream>

#include "polydicke/cli.hpp"

int main(int argc, char** argv) { return polydicke::cli::run(argc, argv, std::cout, std::cerr); }
