#include <iostream>

#include "ncfree/cli.hpp"

int main(int argc, char** argv) { return ncfree::run_cli(argc, argv, std::cout, std::cerr); }
