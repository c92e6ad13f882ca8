#include <iostream>

#include "nlsrad/cli.hpp"

int main(int argc, char** argv) { return nlsrad::run_cli(argc, argv, std::cout, std::cerr); }
