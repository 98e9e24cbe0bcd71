#include <iostream>

#include "swarmetrics/cli.hpp"

int main(int argc, char** argv) { return swarmetrics::run_cli(argc, argv, std::cout, std::cerr); }
