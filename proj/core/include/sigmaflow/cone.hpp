#pragma once

// Pointwise cone condition: sigma_k((chi')^{-1} | j) < c' for every j, and
// the constants of the large-eigenvalue-ratio estimate built on it.

#include <cstddef>
#include <limits>

#include "sigmaflow/geometry.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

struct ConeReport {
  bool in_cone = true;
  /// min over points and j of c' - sigma_k(chi'^{-1} | j); +inf when k = n.
  double margin = std::numeric_limits<double>::infinity();
  std::size_t worst_point = 0;
  int worst_j = 0;
};

ConeReport cone_margin(const HermitianField& chi_prime, const Background& bg, int k,
                       double c_prime);

/// Same criterion with the eigenvalue list of chi' extended by bg.augment;
/// only indices on M are excluded.
ConeReport cone_margin_augmented(const HermitianField& chi_prime, const Background& bg, int k,
                                 double c);

struct TheoremConstants {
  double lambda = 0.0;   ///< chi' >= lambda * omega everywhere
  double c_prime = 0.0;  ///< class constant c'_k
  double eta = 0.0;      ///< c' - max sigma_k(chi'^{-1} | j)
  double epsilon = 0.0;  ///< theta / (1 + theta)

  /// Constants from the (1+theta)^{1/2} (c-eta)/c form of the estimate.
  double delta = 0.0;  ///< lambda (C1 c')^{1/k}
  double N = 0.0;

  /// Constants for which the estimate provably holds (see cone.cpp); the
  /// N above is too small already for n = 2, k = 1, chi' = omega.
  double delta_sufficient = 0.0;
  double N_sufficient = 0.0;
};

/// Requires chi' in the cone, 0 < C1 <= C2 and
/// (1 + theta)^{k/2} sqrt((c' - eta)/c') < 1.
TheoremConstants theorem_constants(const HermitianField& chi_prime, const Background& bg, int k,
                                   double C1, double C2, double theta);

/// (1 - eps) sum_i F^{i ibar}(chi) chi'_{i ibar} - c'^{-1/k} sigma_k(chi^{-1})^{2/k},
/// with chi'_point written in the frame that diagonalizes chi (same index order
/// as the EigenList, i.e. descending chi).
double theorem_gap(const EigenList& chi, const HermitianMatrix& chi_prime_point, int k,
                   double epsilon, double c_prime);

}  // namespace sigmaflow
