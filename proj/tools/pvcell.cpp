#include <iostream>

#include "pvc/cli.hpp"

int main(int argc, char** argv) { return pvc::cli_main(argc, argv, std::cout, std::cerr); }
