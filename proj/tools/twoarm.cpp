#include <iostream>

#include "twoarm/cli.hpp"

int main(int argc, char** argv) { return twoarm::cli::run(argc, argv, std::cout, std::cerr); }
