#include <iostream>

#include "davenport/cli.hpp"

int main(int argc, char** argv) { return davenport::run_command(argc, argv, std::cout, std::cerr); }
