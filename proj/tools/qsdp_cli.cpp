#include "qsdp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qsdp::cli::run(argc, argv, std::cout, std::cerr); }
