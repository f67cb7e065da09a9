#include "scalecal/parallel.hpp"

#include <cstdlib>
#include <omp.h>

namespace scalecal {

static int read_thread_env() {
    const char* raw = std::getenv("SCALECAL_THREADS");
    if (raw == nullptr) return 0;
    char* end = nullptr;
    long value = std::strtol(raw, &end, 10);
    if (end == raw || value < 0) return 0;
    return static_cast<int>(value);
}

int max_threads() {
    static const int capped = [] {
        int n = read_thread_env();
        return n > 0 ? n : omp_get_max_threads();
    }();
    return capped;
}

bool use_parallel(std::size_t items, std::size_t grain) {
    return items >= grain && max_threads() > 1 && omp_in_parallel() == 0;
}

} // namespace scalecal
