#include <iostream>

#include "crossing/cli.hpp"
#include "crossing/execution.hpp"

int main(int argc, char** argv) {
    crossing::apply_thread_limit_from_env();
    return crossing::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
