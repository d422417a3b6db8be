#include <iostream>

#include "flhodge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flh::cli::run(args, std::cout, std::cerr);
}
