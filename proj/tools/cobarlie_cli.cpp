#include <iostream>

#include "cobarlie/cli.hpp"

int main(int argc, char** argv) { return cobarlie::cli::run(argc, argv, std::cout, std::cerr); }
