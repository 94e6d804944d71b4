#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char **argv)
{
    unsigned threads = 1;
    if (argc > 1) {
        threads = static_cast<unsigned>(std::stoul(argv[1]));
    }
    const auto results = symcalc::acceptance::run_all(std::cout, threads);
    for (const auto &r : results) {
        if (!r.passed) {
            return EXIT_FAILURE;
        }
    }
    return EXIT_SUCCESS;
}
