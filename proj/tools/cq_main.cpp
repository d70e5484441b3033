#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bool interactive = isatty(fileno(stdin)) != 0;
    return cq::run_cli(args, std::cin, std::cout, std::cerr, interactive);
}
