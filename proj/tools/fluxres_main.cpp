#include <iostream>

#include "fluxres/commands.hpp"

int main(int argc, char **argv) { return fluxres::run_cli(argc, argv, std::cout, std::cerr); }
