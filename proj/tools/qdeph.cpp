#include <iostream>
#include <string>
#include <vector>

#include "qdeph/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qdeph::cli::run(args, std::cout, std::cerr);
}
