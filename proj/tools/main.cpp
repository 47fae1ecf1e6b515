#include "qrm_cli/run.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return qrm::cli::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
