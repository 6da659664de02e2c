#include "mafoliate/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mafoliate {

std::size_t thread_count() {
  if (const char* env = std::getenv("MAFOLIATE_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace mafoliate
