#include <iostream>

#include "singprof/cli.hpp"

int main(int argc, char** argv) { return singprof::run_cli(argc, argv, std::cout, std::cerr); }
