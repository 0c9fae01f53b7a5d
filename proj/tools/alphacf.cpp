#include <iostream>

#include "alphacf/cli.hpp"

int main(int argc, char** argv) { return alphacf::run_cli(argc, argv, std::cout, std::cerr); }
