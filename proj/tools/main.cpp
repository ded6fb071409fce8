#include <iostream>

#include "sls/harness/cli.hpp"

int main(int argc, char** argv) {
    return sls::harness::run_cli(argc, argv, std::cout, std::cerr);
}
