#include <iostream>

#include "periodfn/cli/app.hpp"

int main(int argc, char** argv) { return periodfn::cli::run_cli(argc, argv, std::cout, std::cerr); }
