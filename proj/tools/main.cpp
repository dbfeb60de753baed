#include <iostream>

#include "setcast/cli.hpp"

int main(int argc, char** argv) { return setcast::cli::run(argc, argv, std::cout, std::cerr); }
