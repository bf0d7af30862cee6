#include <iostream>

#include "congbox/cli.hpp"

int main(int argc, char** argv) { return congbox::cli::run(argc, argv, std::cout, std::cerr); }
