#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return relstab::cli::run_command(argc, argv, std::cout, std::cerr); }
