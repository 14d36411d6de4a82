#include <iostream>

#include "bellfilter/cli.hpp"

int main(int argc, char** argv) { return bellfilter::cli::main(argc, argv, std::cout, std::cerr); }
