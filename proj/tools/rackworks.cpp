#include <iostream>

#include <rackworks/cli.hpp>

int main(int argc, char **argv) { return rackworks::cli::run(argc, argv, std::cout, std::cerr); }
