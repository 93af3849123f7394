#include "selfnorm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return selfnorm::cli::main_entry(argc, argv, std::cout, std::cerr); }
