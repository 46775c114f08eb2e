#pragma once

// Elementary symmetric polynomial calculus on eigenvalue tuples.
//
// Every sigma here is evaluated with the coefficient recurrence of
// prod_i (1 + x_i t). Index conventions: sigma_{-1} = 0, sigma_k = 0 for
// k greater than the tuple length. Tuples are at most kMaxDim long.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>

#include "sigmaflow/fixed_vec.hpp"

namespace sigmaflow {

/// sigma_0 .. sigma_n of a real tuple. Out-of-range orders read as zero.
class Sigmas {
 public:
  Sigmas() = default;
  explicit Sigmas(std::span<const double> x);

  double operator[](int k) const noexcept { return (k < 0 || k > n_) ? 0.0 : c_[k]; }
  int degree() const noexcept { return n_; }

 private:
  std::array<double, kMaxDim + 1> c_{1.0};
  int n_ = 0;
};

/// sigma_k of an arbitrary real tuple (zero outside 0..size).
double sigma(int k, std::span<const double> x);

/// sigma_k of x with the entries at `excluded` removed.
double sigma_without(int k, std::span<const double> x, std::span<const int> excluded);

/// Positive eigenvalue tuple, stored in descending order (index 0 is the largest).
class EigenList {
 public:
  explicit EigenList(std::span<const double> values);
  EigenList(std::initializer_list<double> values);

  int size() const noexcept { return values_.size(); }
  double operator[](int i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_.span(); }

  double largest() const noexcept { return values_[0]; }
  double smallest() const noexcept { return values_[values_.size() - 1]; }

  /// Entrywise reciprocal, re-sorted descending.
  EigenList reciprocal() const;

 private:
  RealTuple values_;
};

/// Small dense real matrix (n <= kMaxDim), row-major.
class RealMatrix {
 public:
  RealMatrix() = default;
  explicit RealMatrix(int n) : n_(n) {}

  int dim() const noexcept { return n_; }
  double& operator()(int i, int j) noexcept { return a_[i * kMaxDim + j]; }
  double operator()(int i, int j) const noexcept { return a_[i * kMaxDim + j]; }

  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;

 private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);

// ---------------------------------------------------------------------------
// Operations on eigenvalue lists.

Sigmas sigma_all(const EigenList& lambda);

/// sigma_k of lambda with at most two indices removed.
double sigma_excl(int k, const EigenList& lambda, std::span<const int> excluded);

/// F(lambda) = -sigma_k(1/lambda)^{1/k} = -(sigma_{n-k}/sigma_n)^{1/k}.
double operator_F(const EigenList& lambda, int k);

/// Diagonal first derivatives dF/d a_{i ibar} at a diagonal matrix.
RealTuple F_gradient(const EigenList& lambda, int k);

/// Off-diagonal second derivative F^{i jbar, j ibar}, i != j.
double F_hessian_pair(const EigenList& lambda, int k, int i, int j);

/// (1/k) sum_j tau_j d sigma_k/d mu_j - sigma_k(tau)^{1/k} sigma_k(mu)^{1-1/k}.
/// The span overload keeps the pairing of mu_j with tau_j as given.
double garding_gap(std::span<const double> mu, std::span<const double> tau, int k);
double garding_gap(const EigenList& mu, const EigenList& tau, int k);

/// g_ij + (g_i / lambda_j) delta_ij for g = sigma_k^{1/k}.
RealMatrix concavity_matrix(const EigenList& lambda, int k);

/// f_ij + (f_i / chi_j) delta_ij for f = -(sigma_{n-k}/sigma_n)^{1/k}, built
/// from closed-form derivatives in the chi variables.
RealMatrix f_correction_matrix(const EigenList& chi, int k);

struct MinorDecomposition {
  RealMatrix a;               ///< A_ii = sigma_{k;i}, A_ij = sigma_{k;ij}
  RealMatrix reconstruction;  ///< sum over |I| = k of lambda_I E_I
  double residual = 0.0;      ///< max |A - reconstruction|
  double relative_residual = 0.0;
};

MinorDecomposition appendix_a_matrix(const EigenList& lambda, int k);

/// Both sides of the identity that reduces the second-group estimate:
/// lhs is the expanded expression, rhs = -sigma_n sigma_{n-k-1}(chi | 0, j).
struct YGroupTerms {
  double lhs = 0.0;
  double rhs = 0.0;
};

YGroupTerms y_group_gap(const EigenList& chi, int k, int j);

/// Value and absolute term magnitude of
///   sum_i (g_ii + g_i/lambda_i)|xi_i|^2 + sum_{i!=j} g_ij xi_i conj(xi_j),
/// g = log sigma_k.
struct QuadraticFormValue {
  double value = 0.0;
  double magnitude = 0.0;
};

QuadraticFormValue glz_quadratic_form(const EigenList& lambda, int k,
                                      std::span<const std::complex<double>> xi);

/// n choose k as a double; zero outside 0..n.
double binomial(int n, int k);

}  // namespace sigmaflow
