#include <iostream>

#include "sketchkit/cli.hpp"

int main(int argc, char** argv) {
    return sketchkit::run_cli(argc, argv, std::cout, std::cerr);
}
