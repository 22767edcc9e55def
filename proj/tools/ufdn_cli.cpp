#include <iostream>

#include "ufdn/cli.hpp"

int main(int argc, char** argv) {
    return ufdn::cli::run(argc, argv, std::cout, std::cerr);
}
