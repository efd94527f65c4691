#include <iostream>

#include "fqe/cli.hpp"

int main(int argc, char** argv) { return fqe::run_cli(argc, argv, std::cout, std::cerr); }
