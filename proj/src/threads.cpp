#include "zforge/threads.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace zforge {

std::size_t worker_threads() {
  std::size_t requested = 0;
  if (const char* env = std::getenv("ZFORGE_THREADS")) {
    try {
      requested = std::stoul(env);
    } catch (...) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::thread::hardware_concurrency();
  return requested == 0 ? 1 : requested;
}

}  // namespace zforge
