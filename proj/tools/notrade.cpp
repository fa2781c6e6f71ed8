#include <iostream>

#include "notrade/cli.hpp"

int main(int argc, char** argv) { return notrade::cli::run(argc, argv, std::cout, std::cerr); }
