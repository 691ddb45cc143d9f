#include <iostream>

#include "airoyalties/cli.hpp"

int main(int argc, char** argv) { return airoyalties::cli::run_cli(argc, argv, std::cout, std::cerr); }
