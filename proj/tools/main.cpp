#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) { return prodgeom::cli::main(argc, argv, std::cout, std::cerr); }
