#include <iostream>

#include "rmt/cli.hpp"

int main(int argc, char** argv) { return rmt::run_cli(argc, argv, std::cout, std::cerr); }
