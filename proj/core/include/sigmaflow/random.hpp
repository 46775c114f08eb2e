#pragma once

// Seeded random draws for the property suite and tests. Each (seed, stream,
// trial) triple gets its own generator so results do not depend on the order
// trials are run in.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include "sigmaflow/hermitian.hpp"

namespace sigmaflow {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t trial = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(trial),
                      static_cast<std::uint32_t>(trial >> 32)};
    engine_.seed(seq);
  }

  /// Uniform in [0, 1) from the top 53 bits (same on every platform).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  /// Integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  /// Standard normal by Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  cplx complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
};

/// Random Hermitian S with Frobenius norm 1.
inline HermitianMatrix random_unit_hermitian(Rng& rng, int n) {
  HermitianMatrix s(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    s.set(i, i, rng.normal());
    for (int j = i + 1; j < n; ++j) s.set(i, j, rng.complex_normal() / std::sqrt(2.0));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm2 += std::norm(s(i, j));
  return (1.0 / std::sqrt(norm2)) * s;
}

/// D^{1/2} (I + eps S) D^{1/2}: D log-uniform in [lo, hi], eps in (0, 0.9).
inline HermitianMatrix random_positive_hermitian(Rng& rng, int n, double lo = 1e-2,
                                                 double hi = 1e2) {
  const HermitianMatrix s = random_unit_hermitian(rng, n);
  const double eps = rng.uniform(0.0, 0.9);
  RealTuple d(n);
  for (int i = 0; i < n; ++i) d[i] = std::sqrt(rng.log_uniform(lo, hi));
  HermitianMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, d[i] * d[i] * (1.0 + eps * s.diag(i)));
    for (int j = i + 1; j < n; ++j) a.set(i, j, d[i] * d[j] * eps * s(i, j));
  }
  return a;
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
inline ComplexMatrix random_unitary(Rng& rng, int n) {
  return eigen_decomposition(random_unit_hermitian(rng, n)).vectors;
}

}  // namespace sigmaflow
