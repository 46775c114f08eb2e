#pragma once

// Small dense complex matrices (n <= kMaxDim): Hermitian eigenproblems,
// generalized eigenvalues against a background metric, principal minors and
// mixed discriminants.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>

#include "sigmaflow/fixed_vec.hpp"

namespace sigmaflow {

using cplx = std::complex<double>;

/// General n x n complex matrix, row-major with fixed stride kMaxDim.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int n) : n_(n) {}
  static ComplexMatrix identity(int n);

  int dim() const noexcept { return n_; }
  cplx& operator()(int i, int j) noexcept { return a_[i * kMaxDim + j]; }
  const cplx& operator()(int i, int j) const noexcept { return a_[i * kMaxDim + j]; }

  ComplexMatrix adjoint() const;

 private:
  int n_ = 0;
  std::array<cplx, kMaxDim * kMaxDim> a_{};
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Determinant by LU with partial pivoting.
cplx det(const ComplexMatrix& a);

/// Hermitian matrix. Only the conjugate-symmetric part is ever stored: set()
/// writes both (i,j) and (j,i).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int n);

  /// Row-major full entry list; rejects input that is not Hermitian to 1e-14
  /// (relative to the largest entry).
  HermitianMatrix(int n, std::span<const cplx> entries);

  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }
  /// Projects a general matrix onto its Hermitian part (A + A*)/2.
  static HermitianMatrix hermitian_part(const ComplexMatrix& a);

  int dim() const noexcept { return m_.dim(); }
  const cplx& operator()(int i, int j) const noexcept { return m_(i, j); }
  void set(int i, int j, cplx v) noexcept;
  double diag(int i) const noexcept { return m_(i, i).real(); }

  const ComplexMatrix& matrix() const noexcept { return m_; }

  HermitianMatrix& operator+=(const HermitianMatrix& b) noexcept;
  HermitianMatrix& operator-=(const HermitianMatrix& b) noexcept;
  HermitianMatrix& operator*=(double s) noexcept;

  double max_abs() const noexcept;
  double trace() const noexcept;

 private:
  ComplexMatrix m_;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);

/// W* A W for a general W (result projected to Hermitian).
HermitianMatrix congruence(const HermitianMatrix& a, const ComplexMatrix& w);

/// Real eigenvalues, descending. Closed form for n <= 2, cyclic Jacobi otherwise.
RealTuple eigvals(const HermitianMatrix& a);

struct EigenDecomposition {
  RealTuple values;       ///< descending
  ComplexMatrix vectors;  ///< column i belongs to values[i]
};

/// A = V diag(values) V*, V unitary. Always Jacobi.
EigenDecomposition eigen_decomposition(const HermitianMatrix& a);

/// Precomputed Cholesky factor of a positive metric G = L L*, used for
/// eigenvalues relative to G at many points.
class MetricFrame {
 public:
  explicit MetricFrame(const HermitianMatrix& g);

  int dim() const noexcept { return l_.dim(); }
  const HermitianMatrix& metric() const noexcept { return g_; }
  double det() const noexcept { return det_; }

  /// L^{-1} A L^{-*}; its eigenvalues are those of the pencil (A, G).
  HermitianMatrix reduce(const HermitianMatrix& a) const;
  RealTuple eigvals(const HermitianMatrix& a) const;

  /// values and W with W* A W = diag(values), W* G W = I.
  EigenDecomposition pencil(const HermitianMatrix& a) const;

 private:
  bool identity_ = false;
  HermitianMatrix g_;
  ComplexMatrix l_;
  ComplexMatrix l_inv_;
  double det_ = 1.0;
};

/// Eigenvalues of the pencil (A, G), descending. G must be positive.
RealTuple eigvals_metric(const HermitianMatrix& a, const HermitianMatrix& g);

/// sigma_0 .. sigma_n of the eigenvalues, as sums of principal minors
/// (no eigensolve). Entries past n are zero.
using SigmaList = FixedVec<double, kMaxDim + 1>;
SigmaList principal_minor_sums(const HermitianMatrix& a);

/// Smallest eigenvalue; convenience for positivity checks.
double min_eigenvalue(const HermitianMatrix& a);

struct MinorDets {
  double det_a = 0.0;
  double det_i = 0.0;           ///< principal minor on I
  double det_complement = 0.0;  ///< principal minor on the complement of I
};

MinorDets minor_dets(const HermitianMatrix& a, std::span<const int> index_set);

/// Determinant of a Hermitian matrix (real).
double det(const HermitianMatrix& a);

/// sigma_k(A^{-1}) - sigma_k(diag(A)^{-1}); A positive.
double diag_sigma_gap(const HermitianMatrix& a, int k);

struct WedgeFactor {
  HermitianMatrix matrix;
  int multiplicity = 1;
};

/// D(A_1, ..., A_n) = (1/n!) sum over permutations of det with column i taken
/// from A_{pi(i)}. D(A, ..., A) = det A.
double mixed_discriminant(std::span<const WedgeFactor> factors);
double mixed_discriminant(std::initializer_list<WedgeFactor> factors);

/// (A^l ^ B^{n-l}) / omega^n for constant forms with omega = identity.
double wedge_ratio(const HermitianMatrix& a, int l, const HermitianMatrix& b);

/// (A_1^{m_1} ^ ... ) / omega^n with omega = G.
double wedge_ratio(std::span<const WedgeFactor> factors, const MetricFrame& frame);

}  // namespace sigmaflow
