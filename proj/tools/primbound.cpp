#include <iostream>

#include "primbound/cli.hpp"

int main(int argc, char** argv) { return primbound::run_cli(argc, argv, std::cout, std::cerr); }
