#include <iostream>

#include "qdela/cli.hpp"

int main(int argc, char** argv) {
    return qdela::run_cli(argc, argv, std::cout, std::cerr);
}
