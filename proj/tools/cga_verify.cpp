#include "cga/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cga::cli::main_entry(argc, argv, std::cout, std::cerr); }
