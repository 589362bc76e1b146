#include <mzvlab/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return mzvlab::cli::run(argc, argv, std::cout, std::cerr); }
