#pragma once

// Randomized property suite over the algebraic facts the flow analysis uses,
// plus two standalone inequality helpers.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sigmaflow/hermitian.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

struct CheckResult {
  std::string name;
  std::string citation;  ///< which stated fact the check exercises
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Largest normalized excess over the bound seen (<= 0 means every trial passed
  /// with room to spare).
  double worst_violation = 0.0;
  std::uint64_t seed = 0;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<CheckResult> checks;

  std::size_t failures() const noexcept;
  bool passed() const noexcept { return failures() == 0; }
};

struct SuiteOptions {
  /// Debug aid: flips every tolerance negative so that the suite must fail.
  bool corrupt_tolerance = false;
};

/// Runs every check with `trials` draws each; n in {2,3,4}, k in [1, n].
SuiteReport run_property_suite(std::uint64_t seed, std::size_t trials, SuiteOptions options = {});

/// g_j = w_j/w_{j-1} - w_{j+1}/w_j, j = 1..n-1, with w_j = sigma_{n-j}(chi)/C(n,j).
std::vector<double> newton_chain_gaps(const EigenList& chi);

/// (int omega^{n-1} ^ a)^2 - (int omega^n)(int omega^{n-2} ^ a^2) for constant a,
/// omega = identity, unit volume. n >= 3.
double hodge_expansion_gap(const HermitianMatrix& a, int n);

/// c_1^2 - c_2 for the class of omega + eps a (omega = identity).
double hodge_class_defect(const HermitianMatrix& a, double eps);

}  // namespace sigmaflow
