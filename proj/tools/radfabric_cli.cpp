#include <iostream>

#include "radfabric/orchestrator/cli.hpp"

int main(int argc, char** argv) { return radfabric::cli::run(argc, argv, std::cout, std::cerr); }
