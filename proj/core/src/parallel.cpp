#include "aerocov/parallel.hpp"

#include <cstdlib>
#include <string>

namespace aerocov {

unsigned default_thread_count() {
  if (const char* env = std::getenv("AEROCOV_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) {
      return static_cast<unsigned>(n);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

} // namespace aerocov
