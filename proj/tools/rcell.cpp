#include "rcell/cli.hpp"

#include <exception>
#include <iostream>

int main(int argc, char **argv) {
    try {
        return rcell::cli::cli_main(argc, argv);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
