#include <iostream>

#include "pmelab/cli.hpp"

int main(int argc, char** argv) { return pmelab::run_cli(argc, argv, std::cout, std::cerr); }
