#include <iostream>

#include "ergo/tools/commands.hpp"

int main(int argc, char** argv) {
    return ergo::tools::run_cli(argc, argv, std::cout, std::cerr);
}
