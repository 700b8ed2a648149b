#include <iostream>

#include "diot/cli.hpp"

int main(int argc, char** argv) { return diot::run_cli(argc, argv, std::cout, std::cerr); }
