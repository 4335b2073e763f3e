#include "crossing/execution.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace crossing {

int apply_thread_limit_from_env() {
    const char* raw = std::getenv("CROSSING_THREADS");
    if (raw == nullptr) return 0;
    try {
        std::size_t used = 0;
        const int n = std::stoi(raw, &used);
        if (used != std::string(raw).size() || n < 1) return 0;
        omp_set_num_threads(n);
        return n;
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace crossing
