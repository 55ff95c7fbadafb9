#include <iostream>
#include <string>
#include <vector>

#include "hierdepth/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hierdepth::cli::run(args, std::cout, std::cerr);
}
