#include <iostream>
#include <string>
#include <vector>

#include "sgf/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return sgf::cli_main(args, std::cout, std::cerr);
}
