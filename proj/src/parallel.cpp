#include "singprof/parallel.hpp"

#include <cstdlib>
#include <string>

namespace singprof {

unsigned default_threads() {
  if (const char* env = std::getenv("SINGPROF_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace singprof
