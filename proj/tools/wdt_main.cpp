#include <iostream>

#include "wdt/cli.hpp"

int main(int argc, char** argv) {
    return wdt::run(argc, argv, std::cout, std::cerr);
}
