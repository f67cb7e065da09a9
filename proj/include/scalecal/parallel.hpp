#pragma once

#include <cstddef>

namespace scalecal {

/// Worker cap for OpenMP kernels. Reads SCALECAL_THREADS once per process;
/// 0 or unset means the OpenMP default.
int max_threads();

/// True when a kernel over `items` elements should fan out: enough work,
/// more than one worker available, and not already inside a parallel region.
bool use_parallel(std::size_t items, std::size_t grain);

} // namespace scalecal
