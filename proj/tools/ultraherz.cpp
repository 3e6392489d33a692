#include "ultraherz/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ultraherz::cli_main(argc, argv, std::cout, std::cerr); }
