#include "runner.hpp"

#include <iostream>

int main(int argc, char** argv) { return hdsine::cli::run(argc, argv, std::cout, std::cerr); }
