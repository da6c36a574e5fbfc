#include <iostream>

#include "seqmatch/cli.hpp"

int main(int argc, char** argv) { return seqmatch::cli::run(argc, argv, std::cout, std::cerr); }
