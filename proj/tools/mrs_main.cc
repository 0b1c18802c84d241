#include <iostream>

#include "mrs/cli.hh"

int main(int argc, char** argv) { return mrs::run_cli(argc, argv, std::cout, std::cerr); }
