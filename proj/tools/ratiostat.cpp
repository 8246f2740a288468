#include <iostream>

#include "ratiostat/cli.hpp"

int main(int argc, char** argv) { return ratiostat::run_cli(argc, argv, std::cout, std::cerr); }
