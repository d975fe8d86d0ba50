#include "dmlimits/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmlimits {

int max_threads() {
#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  if (const char* cap = std::getenv("DM_LIMITS_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && parsed > 0 && parsed < threads) threads = static_cast<int>(parsed);
  }
  return threads;
}

namespace kernels {

std::size_t argmin(std::span<const double> values) {
  std::size_t best = values.size();
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (best == values.size() || values[i] < best_value) {
      best = i;
      best_value = values[i];
    }
  }
  return best == values.size() ? 0 : best;
}

}  // namespace kernels
}  // namespace dmlimits
