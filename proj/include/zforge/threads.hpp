#pragma once

#include <cstddef>

namespace zforge {

// Worker cap from ZFORGE_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_threads();

}  // namespace zforge
