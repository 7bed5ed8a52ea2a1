#include "probterm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return probterm::run(argc, argv, std::cout, std::cerr); }
