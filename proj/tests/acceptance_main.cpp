#include <cstring>
#include <iostream>

#include "stenv/acceptance.hpp"

int main(int argc, char** argv) {
    stenv::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0) {
            opt.fast = true;
        } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            opt.threads = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance_tests [--fast] [--threads N]\n";
            return 2;
        }
    }
    const int failures = stenv::run_acceptance(opt, std::cout);
    return failures == 0 ? 0 : 1;
}
