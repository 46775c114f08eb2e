#include "sigmaflow/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigmaflow {

void configure_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    const char* env = std::getenv("SIGMAFLOW_THREADS");
    if (env == nullptr) return;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return;
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(v));
#endif
  });
}

int thread_count() {
  configure_threads();
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void NeumaierSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double neumaier_sum(std::span<const double> values) {
  NeumaierSum s;
  for (double v : values) s.add(v);
  return s.value();
}

}  // namespace sigmaflow
