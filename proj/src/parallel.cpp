#include "bglab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace bglab {

int configure_threads(std::optional<int> requested) {
  int n = 0;
  if (requested) {
    n = *requested;
  } else if (const char* env = std::getenv("BGLAB_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (...) {
      n = 0;
    }
  }
  if (n > 0) omp_set_num_threads(n);
  return thread_count();
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace bglab
