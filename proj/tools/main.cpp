#include <iostream>

#include "hybridcast/cli.hpp"

int main(int argc, char** argv) { return hybridcast::run_cli(argc, argv, std::cout, std::cerr); }
