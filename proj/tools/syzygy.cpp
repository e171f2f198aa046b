#include <iostream>

#include <nakayama/cli.hpp>

int main(int argc, char** argv) { return nakayama::cli::run(argc, argv, std::cout, std::cerr); }
