#pragma once

#include <span>

namespace sigmaflow {

/// Applies SIGMAFLOW_THREADS (if set) to the OpenMP runtime. Idempotent;
/// called lazily by every parallel kernel.
void configure_threads();

/// Worker count the parallel kernels will use (1 without OpenMP).
int thread_count();

/// Neumaier-compensated running sum. Reductions over grids go through this,
/// always in index order, so results do not depend on the thread count.
class NeumaierSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double neumaier_sum(std::span<const double> values);

}  // namespace sigmaflow
