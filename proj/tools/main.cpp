#include <iostream>

#include "fracdisp_cli/run.hpp"

int main(int argc, char** argv) { return fracdisp::cli::run(argc, argv, std::cout, std::cerr); }
