#include <iostream>

#include "saigo/cli.hpp"

int main(int argc, char** argv) { return saigo::cli::run(argc, argv, std::cout, std::cerr); }
