#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return impact::cli::main(argc, argv, std::cout, std::cerr); }
