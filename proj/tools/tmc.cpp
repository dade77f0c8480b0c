#include <iostream>

#include "thimac/cli.hpp"

int main(int argc, char** argv) { return thimac::cli_main(argc, argv, std::cout, std::cerr); }
