#include "sigmaflow/symfun.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

void check_order(int k, int n) {
  if (k < 1 || k > n) {
    throw ArgumentError("order k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
}

void check_index(int i, int n) {
  if (i < 0 || i >= n) {
    throw ArgumentError("index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
  }
}

RealTuple reciprocals(std::span<const double> x) {
  RealTuple r;
  for (double v : x) r.push_back(1.0 / v);
  return r;
}

}  // namespace

Sigmas::Sigmas(std::span<const double> x) : n_(static_cast<int>(x.size())) {
  if (n_ > kMaxDim) throw ArgumentError("tuple longer than kMaxDim");
  c_.fill(0.0);
  c_[0] = 1.0;
  for (int m = 0; m < n_; ++m) {
    for (int j = m + 1; j >= 1; --j) c_[j] += x[m] * c_[j - 1];
  }
}

double sigma(int k, std::span<const double> x) { return Sigmas(x)[k]; }

double sigma_without(int k, std::span<const double> x, std::span<const int> excluded) {
  RealTuple rest;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) rest.push_back(x[i]);
  }
  return sigma(k, rest.span());
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// ---------------------------------------------------------------------------

EigenList::EigenList(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 1 || n > kMaxDim) {
    throw ArgumentError("eigenvalue list length " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxDim) + "]");
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("eigenvalue list entry " + std::to_string(v) + " is not a finite positive");
    }
    values_.push_back(v);
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

EigenList::EigenList(std::initializer_list<double> values)
    : EigenList(std::span<const double>(values.begin(), values.size())) {}

EigenList EigenList::reciprocal() const { return EigenList(reciprocals(values()).span()); }

double RealMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

double RealMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

// ---------------------------------------------------------------------------

Sigmas sigma_all(const EigenList& lambda) { return Sigmas(lambda.values()); }

double sigma_excl(int k, const EigenList& lambda, std::span<const int> excluded) {
  const int n = lambda.size();
  if (excluded.size() > 2) throw ArgumentError("at most two excluded indices");
  for (int i : excluded) check_index(i, n);
  if (excluded.size() == 2 && excluded[0] == excluded[1]) {
    throw ArgumentError("excluded indices must be distinct");
  }
  if (k < -1 || k > n) throw ArgumentError("order k=" + std::to_string(k) + " outside [-1, n]");
  return sigma_without(k, lambda.values(), excluded);
}

double operator_F(const EigenList& lambda, int k) {
  check_order(k, lambda.size());
  const RealTuple inv = reciprocals(lambda.values());
  return -std::pow(sigma(k, inv.span()), 1.0 / k);
}

RealTuple F_gradient(const EigenList& lambda, int k) {
  const int n = lambda.size();
  check_order(k, n);
  const RealTuple inv = reciprocals(lambda.values());
  const double s = sigma(k, inv.span());
  const double front = std::pow(s, 1.0 / k - 1.0) / k;
  RealTuple grad(n);
  for (int i = 0; i < n; ++i) {
    const int ex[] = {i};
    grad[i] = front * sigma_without(k - 1, inv.span(), ex) * inv[i] * inv[i];
  }
  return grad;
}

double F_hessian_pair(const EigenList& lambda, int k, int i, int j) {
  const int n = lambda.size();
  check_order(k, n);
  check_index(i, n);
  check_index(j, n);
  if (i == j) throw ArgumentError("F_hessian_pair needs distinct indices");
  const auto chi = lambda.values();
  const Sigmas s(chi);
  const int ex[] = {i, j};
  const double q = s[n - k] / s[n];
  const double num = s[n] * sigma_without(n - k - 2, chi, ex) - s[n - k] * sigma_without(n - 2, chi, ex);
  return std::pow(q, 1.0 / k - 1.0) / k * num / (s[n] * s[n]);
}

double garding_gap(std::span<const double> mu, std::span<const double> tau, int k) {
  const int n = static_cast<int>(mu.size());
  if (tau.size() != mu.size()) throw ArgumentError("garding_gap: tuple lengths differ");
  check_order(k, n);
  for (int i = 0; i < n; ++i) {
    if (!(mu[i] > 0.0) || !(tau[i] > 0.0)) throw DomainError("garding_gap: tuples must be positive");
  }
  double lhs = 0.0;
  for (int j = 0; j < n; ++j) {
    const int ex[] = {j};
    lhs += tau[j] * sigma_without(k - 1, mu, ex);
  }
  lhs /= k;
  const double rhs = std::pow(sigma(k, tau), 1.0 / k) * std::pow(sigma(k, mu), 1.0 - 1.0 / k);
  return lhs - rhs;
}

double garding_gap(const EigenList& mu, const EigenList& tau, int k) {
  return garding_gap(mu.values(), tau.values(), k);
}

RealMatrix concavity_matrix(const EigenList& lambda, int k) {
  const int n = lambda.size();
  check_order(k, n);
  const auto x = lambda.values();
  const double sk = sigma(k, x);
  const double p1 = std::pow(sk, 1.0 / k - 1.0) / k;                         // g' factor
  const double p2 = (1.0 / k) * (1.0 / k - 1.0) * std::pow(sk, 1.0 / k - 2.0);  // g'' factor
  RealTuple d1(n);
  for (int i = 0; i < n; ++i) {
    const int ex[] = {i};
    d1[i] = sigma_without(k - 1, x, ex);
  }
  RealMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double gij = p2 * d1[i] * d1[j];
      if (i != j) {
        const int ex[] = {i, j};
        gij += p1 * sigma_without(k - 2, x, ex);
      }
      m(i, j) = gij + (i == j ? p1 * d1[i] / x[i] : 0.0);
    }
  }
  return m;
}

RealMatrix f_correction_matrix(const EigenList& chi, int k) {
  const int n = chi.size();
  check_order(k, n);
  const auto x = chi.values();
  const Sigmas s(x);
  const double S = s[n - k];
  const double P = s[n];
  const double q = S / P;

  RealTuple Si(n), Pi(n), qi(n);
  for (int i = 0; i < n; ++i) {
    const int ex[] = {i};
    Si[i] = sigma_without(n - k - 1, x, ex);
    Pi[i] = sigma_without(n - 1, x, ex);
    qi[i] = Si[i] / P - S * Pi[i] / (P * P);
  }

  const double a1 = -std::pow(q, 1.0 / k - 1.0) / k;
  const double a2 = -(1.0 / k) * (1.0 / k - 1.0) * std::pow(q, 1.0 / k - 2.0);

  RealMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double Sij = 0.0, Pij = 0.0;
      if (i != j) {
        const int ex[] = {i, j};
        Sij = sigma_without(n - k - 2, x, ex);
        Pij = sigma_without(n - 2, x, ex);
      }
      const double qij = Sij / P - (Si[i] * Pi[j] + Si[j] * Pi[i]) / (P * P) - S * Pij / (P * P) +
                         2.0 * S * Pi[i] * Pi[j] / (P * P * P);
      const double fij = a2 * qi[i] * qi[j] + a1 * qij;
      m(i, j) = fij + (i == j ? a1 * qi[i] / x[i] : 0.0);
    }
  }
  return m;
}

MinorDecomposition appendix_a_matrix(const EigenList& lambda, int k) {
  const int n = lambda.size();
  check_order(k, n);
  const auto x = lambda.values();
  MinorDecomposition out{RealMatrix(n), RealMatrix(n), 0.0, 0.0};

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        const int ex[] = {i};
        out.a(i, i) = x[i] * sigma_without(k - 1, x, ex);
      } else {
        const int ex[] = {i, j};
        out.a(i, j) = x[i] * x[j] * sigma_without(k - 2, x, ex);
      }
    }
  }

  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= x[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((mask & (1u << i)) && (mask & (1u << j))) out.reconstruction(i, j) += prod;
  }

  out.residual = (out.a - out.reconstruction).max_abs();
  out.relative_residual = out.residual / std::max(1.0, out.a.max_abs());
  return out;
}

YGroupTerms y_group_gap(const EigenList& chi, int k, int j) {
  const int n = chi.size();
  check_order(k, n);
  if (k == n) throw ArgumentError("y_group_gap requires k < n");
  check_index(j, n);
  if (j == 0) throw ArgumentError("y_group_gap: j must differ from the leading index 0");
  const auto x = chi.values();
  const Sigmas s(x);
  const int ex1j[] = {0, j};
  const int exj[] = {j};
  YGroupTerms out;
  out.lhs = x[0] * (s[n] * sigma_without(n - k - 2, x, ex1j) -
                    s[n - k] * sigma_without(n - 2, x, ex1j)) +
            s[n - k] * sigma_without(n - 1, x, exj) - sigma_without(n - k - 1, x, exj) * s[n];
  out.rhs = -s[n] * sigma_without(n - k - 1, x, ex1j);
  return out;
}

QuadraticFormValue glz_quadratic_form(const EigenList& lambda, int k,
                                      std::span<const std::complex<double>> xi) {
  const int n = lambda.size();
  check_order(k, n);
  if (static_cast<int>(xi.size()) != n) throw ArgumentError("glz_quadratic_form: xi length");
  const auto x = lambda.values();
  const double sk = sigma(k, x);
  RealTuple gi(n);
  for (int i = 0; i < n; ++i) {
    const int ex[] = {i};
    gi[i] = sigma_without(k - 1, x, ex) / sk;
  }
  QuadraticFormValue out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // coeff = plus - minus; the magnitude uses the parts before they cancel
      // (for k = n the whole form vanishes identically).
      double plus, minus = gi[i] * gi[j];
      if (i == j) {
        plus = gi[i] / x[i];
      } else {
        const int ex[] = {i, j};
        plus = sigma_without(k - 2, x, ex) / sk;
      }
      const double w = std::real(xi[i] * std::conj(xi[j]));
      out.value += (plus - minus) * w;
      out.magnitude += (plus + minus) * std::abs(xi[i]) * std::abs(xi[j]);
    }
  }
  return out;
}

}  // namespace sigmaflow
