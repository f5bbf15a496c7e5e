#include <iostream>

#include "ptl/cli.hpp"

int main(int argc, char** argv) { return ptl::cli::run(argc, argv, std::cout, std::cerr); }
