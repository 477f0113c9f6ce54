#include <iostream>

#include "aigve/cli.hpp"

int main(int argc, char** argv) { return aigve::run_cli(argc, argv, std::cout, std::cerr); }
