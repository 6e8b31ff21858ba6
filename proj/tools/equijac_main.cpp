#include <iostream>

#include "equijac/runner.hpp"

int main(int argc, char** argv) {
    return equijac::cli_main(argc, argv, std::cout, std::cerr);
}
