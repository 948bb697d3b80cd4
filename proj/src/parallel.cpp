#include "qmaforge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qmaforge {

int worker_count() {
  if (const char* env = std::getenv("QMA_FORGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qmaforge
