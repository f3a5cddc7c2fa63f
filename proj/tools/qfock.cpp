#include <iostream>

#include "qfock/cli.hpp"

int main(int argc, char** argv) { return qfock::cli::run_cli(argc, argv, std::cout, std::cerr); }
