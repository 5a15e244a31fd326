#include "svasym/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return svasym::cli::run(argc, argv, std::cout, std::cerr); }
