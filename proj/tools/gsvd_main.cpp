#include <iostream>

#include "trgsvd/cli.hpp"

int main(int argc, char** argv) { return trgsvd::run(argc, argv, std::cout, std::cerr); }
