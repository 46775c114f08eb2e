#include "sigmaflow/hermitian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

namespace {

constexpr int kMaxSweeps = 30;

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw ArgumentError("matrix dimension " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxDim) + "]");
  }
}

double off_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// Cyclic Jacobi on a Hermitian matrix held in `a` (destroyed). If v is
// non-null it accumulates the rotations.
RealTuple jacobi(ComplexMatrix a, ComplexMatrix* v) {
  const int n = a.dim();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) total += std::norm(a(i, j));
  const double stop = total * 1e-32;

  for (int sweep = 0; sweep < kMaxSweeps && off_norm2(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const cplx phase = a(p, q) / r;  // e^{i theta}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, e^{-i theta}) * [[c, s], [-s, c]] restricted to (p, q).
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);

        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * r;
        a(q, q) = aqq + t * r;

        if (v != nullptr) {
          for (int k = 0; k < n; ++k) {
            const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = vkp * jpp + vkq * jqp;
            (*v)(k, q) = vkp * jpq + vkq * jqq;
          }
        }
      }
    }
  }

  RealTuple out(n);
  for (int i = 0; i < n; ++i) out[i] = a(i, i).real();
  return out;
}

// Lower Cholesky factor; throws DomainError if a is not positive definite.
ComplexMatrix cholesky(const HermitianMatrix& a) {
  const int n = a.dim();
  ComplexMatrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw DomainError("matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j).real();
    }
  }
  return l;
}

ComplexMatrix lower_inverse(const ComplexMatrix& l) {
  const int n = l.dim();
  ComplexMatrix inv(n);
  for (int c = 0; c < n; ++c) {
    inv(c, c) = 1.0 / l(c, c);
    for (int i = c + 1; i < n; ++i) {
      cplx s = 0.0;
      for (int k = c; k < i; ++k) s -= l(i, k) * inv(k, c);
      inv(i, c) = s / l(i, i);
    }
  }
  return inv;
}

void sort_pairs_descending(EigenDecomposition& e) {
  const int n = e.values.size();
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int x, int y) { return e.values[x] > e.values[y]; });
  EigenDecomposition sorted{RealTuple(n), ComplexMatrix(n)};
  for (int c = 0; c < n; ++c) {
    sorted.values[c] = e.values[order[c]];
    for (int r = 0; r < n; ++r) sorted.vectors(r, c) = e.vectors(r, order[c]);
  }
  e = sorted;
}

}  // namespace

// ---------------------------------------------------------------------------

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.dim();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

cplx det(const ComplexMatrix& m) {
  const int n = m.dim();
  ComplexMatrix a = m;
  cplx d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      d = -d;
    }
    d *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const cplx f = a(r, c) / a(c, c);
      for (int j = c + 1; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(int n) : m_(n) { check_dim(n); }

HermitianMatrix::HermitianMatrix(int n, std::span<const cplx> entries) : m_(n) {
  check_dim(n);
  if (static_cast<int>(entries.size()) != n * n) {
    throw ArgumentError("expected " + std::to_string(n * n) + " matrix entries, got " +
                        std::to_string(entries.size()));
  }
  double scale = 1.0;
  for (const cplx& z : entries) scale = std::max(scale, std::abs(z));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx aij = entries[i * n + j];
      const cplx aji = entries[j * n + i];
      if (std::abs(aij - std::conj(aji)) > 1e-14 * scale) {
        throw ArgumentError("matrix is not Hermitian at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      }
      set(i, j, i == j ? cplx(aij.real(), 0.0) : aij);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[i]);
  return m;
}

HermitianMatrix HermitianMatrix::hermitian_part(const ComplexMatrix& a) {
  HermitianMatrix m(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    m.set(i, i, a(i, i).real());
    for (int j = i + 1; j < a.dim(); ++j) m.set(i, j, 0.5 * (a(i, j) + std::conj(a(j, i))));
  }
  return m;
}

void HermitianMatrix::set(int i, int j, cplx v) noexcept {
  if (i == j) {
    m_(i, i) = v.real();
  } else {
    m_(i, j) = v;
    m_(j, i) = std::conj(v);
  }
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& b) noexcept {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m_(i, j) += b(i, j);
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& b) noexcept {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m_(i, j) -= b(i, j);
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) noexcept {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m_(i, j) *= s;
  return *this;
}

double HermitianMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m = std::max(m, std::abs(m_(i, j)));
  return m;
}

double HermitianMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < dim(); ++i) t += diag(i);
  return t;
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

HermitianMatrix congruence(const HermitianMatrix& a, const ComplexMatrix& w) {
  return HermitianMatrix::hermitian_part(w.adjoint() * a.matrix() * w);
}

// ---------------------------------------------------------------------------

RealTuple eigvals(const HermitianMatrix& a) {
  const int n = a.dim();
  if (n == 1) return RealTuple{a.diag(0)};
  if (n == 2) {
    const double p = a.diag(0), q = a.diag(1);
    const double mean = 0.5 * (p + q);
    const double rad = std::hypot(0.5 * (p - q), std::abs(a(0, 1)));
    const double detv = p * q - std::norm(a(0, 1));
    // Take the larger-magnitude root directly, recover the other from det.
    double hi, lo;
    if (mean >= 0.0) {
      hi = mean + rad;
      lo = hi != 0.0 ? detv / hi : mean - rad;
    } else {
      lo = mean - rad;
      hi = detv / lo;
    }
    if (hi < lo) std::swap(hi, lo);
    return RealTuple{hi, lo};
  }
  RealTuple v = jacobi(a.matrix(), nullptr);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

EigenDecomposition eigen_decomposition(const HermitianMatrix& a) {
  EigenDecomposition e{RealTuple(), ComplexMatrix::identity(a.dim())};
  e.values = jacobi(a.matrix(), &e.vectors);
  sort_pairs_descending(e);
  return e;
}

SigmaList principal_minor_sums(const HermitianMatrix& a) {
  const int n = a.dim();
  SigmaList s(n + 1, 0.0);
  s[0] = 1.0;
  if (n >= 1) {
    for (int i = 0; i < n; ++i) s[1] += a.diag(i);
  }
  if (n >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s[2] += a.diag(i) * a.diag(j) - std::norm(a(i, j));
  }
  if (n >= 3) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const int size = std::popcount(mask);
      if (size < 3) continue;
      FixedVec<int, kMaxDim> idx;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) idx.push_back(i);
      if (size == 3) {
        // Hermitian 3x3 determinant; the flow evaluates this at every grid point.
        const int i = idx[0], j = idx[1], l = idx[2];
        const double d0 = a.diag(i), d1 = a.diag(j), d2 = a.diag(l);
        const cplx x = a(i, j), y = a(j, l), z = a(i, l);
        s[3] += d0 * d1 * d2 + 2.0 * (x * y * std::conj(z)).real() - d0 * std::norm(y) -
                d1 * std::norm(z) - d2 * std::norm(x);
        continue;
      }
      ComplexMatrix m(size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) m(r, c) = a(idx[r], idx[c]);
      s[size] += det(m).real();
    }
  }
  return s;
}

double min_eigenvalue(const HermitianMatrix& a) {
  const RealTuple v = eigvals(a);
  return v[v.size() - 1];
}

// ---------------------------------------------------------------------------

MetricFrame::MetricFrame(const HermitianMatrix& g) : g_(g) {
  identity_ = true;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      if (g(i, j) != (i == j ? cplx(1.0) : cplx(0.0))) identity_ = false;
  try {
    l_ = cholesky(g);
  } catch (const DomainError&) {
    throw DomainError("background metric is not positive definite");
  }
  l_inv_ = lower_inverse(l_);
  det_ = 1.0;
  for (int i = 0; i < g.dim(); ++i) det_ *= std::norm(l_(i, i));
}

HermitianMatrix MetricFrame::reduce(const HermitianMatrix& a) const {
  if (identity_) return a;
  return congruence(a, l_inv_.adjoint());
}

RealTuple MetricFrame::eigvals(const HermitianMatrix& a) const {
  return sigmaflow::eigvals(reduce(a));
}

EigenDecomposition MetricFrame::pencil(const HermitianMatrix& a) const {
  EigenDecomposition e = eigen_decomposition(reduce(a));
  e.vectors = l_inv_.adjoint() * e.vectors;
  return e;
}

RealTuple eigvals_metric(const HermitianMatrix& a, const HermitianMatrix& g) {
  return MetricFrame(g).eigvals(a);
}

// ---------------------------------------------------------------------------

double det(const HermitianMatrix& a) { return det(a.matrix()).real(); }

MinorDets minor_dets(const HermitianMatrix& a, std::span<const int> index_set) {
  const int n = a.dim();
  if (index_set.empty() || static_cast<int>(index_set.size()) >= n) {
    throw ArgumentError("index set must be a proper nonempty subset");
  }
  std::array<bool, kMaxDim> in{};
  for (int i : index_set) {
    if (i < 0 || i >= n || in[i]) throw ArgumentError("index set has a bad or repeated index");
    in[i] = true;
  }
  if (!(min_eigenvalue(a) > 0.0)) throw DomainError("minor_dets needs a positive matrix");

  auto sub = [&](bool want) {
    FixedVec<int, kMaxDim> idx;
    for (int i = 0; i < n; ++i)
      if (in[i] == want) idx.push_back(i);
    ComplexMatrix m(idx.size());
    for (int r = 0; r < idx.size(); ++r)
      for (int c = 0; c < idx.size(); ++c) m(r, c) = a(idx[r], idx[c]);
    return det(m).real();
  };
  return MinorDets{det(a), sub(true), sub(false)};
}

double diag_sigma_gap(const HermitianMatrix& a, int k) {
  const int n = a.dim();
  if (k < 1 || k > n) throw ArgumentError("diag_sigma_gap: order outside [1, n]");
  const RealTuple ev = eigvals(a);
  if (!(ev[n - 1] > 0.0)) throw DomainError("diag_sigma_gap needs a positive matrix");
  const Sigmas s(ev.span());
  RealTuple inv_diag(n);
  for (int i = 0; i < n; ++i) inv_diag[i] = 1.0 / a.diag(i);
  return s[n - k] / s[n] - sigma(k, inv_diag.span());
}

// ---------------------------------------------------------------------------

namespace {

// Real part of det for the sizes the wedge integrals hit at every grid point.
double small_det(const ComplexMatrix& m) {
  switch (m.dim()) {
    case 1:
      return m(0, 0).real();
    case 2:
      return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    case 3:
      return (m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
              m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
              m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
          .real();
    default:
      return det(m).real();
  }
}

}  // namespace

double mixed_discriminant(std::span<const WedgeFactor> factors) {
  FixedVec<const HermitianMatrix*, kMaxDim> slots;
  int n = -1;
  int total = 0;
  for (const WedgeFactor& f : factors) {
    if (f.multiplicity < 0) throw ArgumentError("negative multiplicity");
    if (f.multiplicity == 0) continue;
    if (n < 0) n = f.matrix.dim();
    if (f.matrix.dim() != n) throw ArgumentError("mixed_discriminant: factor dimensions differ");
    total += f.multiplicity;
    if (total > kMaxDim) throw ArgumentError("mixed_discriminant: multiplicities exceed n");
    for (int m = 0; m < f.multiplicity; ++m) slots.push_back(&f.matrix);
  }
  if (n < 0 || total != n) throw ArgumentError("mixed_discriminant: multiplicities must sum to n");

  // Columns are drawn from slot groups; equal factors share a label, so
  // next_permutation visits each distinct arrangement once. Every arrangement
  // stands for the same number of plain permutations, so the mean is unchanged.
  std::array<int, kMaxDim> label{};
  std::array<const HermitianMatrix*, kMaxDim> group{};
  for (int i = 0, l = -1; i < n; ++i) {
    if (i == 0 || slots[i] != slots[i - 1]) group[++l] = slots[i];
    label[i] = l;
  }
  double sum = 0.0;
  int count = 0;
  do {
    ComplexMatrix m(n);
    for (int c = 0; c < n; ++c) {
      const HermitianMatrix& src = *group[label[c]];
      for (int r = 0; r < n; ++r) m(r, c) = src(r, c);
    }
    sum += small_det(m);
    ++count;
  } while (std::next_permutation(label.begin(), label.begin() + n));
  return sum / count;
}

double mixed_discriminant(std::initializer_list<WedgeFactor> factors) {
  return mixed_discriminant(std::span<const WedgeFactor>(factors.begin(), factors.size()));
}

double wedge_ratio(const HermitianMatrix& a, int l, const HermitianMatrix& b) {
  const int n = a.dim();
  if (l < 0 || l > n) throw ArgumentError("wedge_ratio: power outside [0, n]");
  return mixed_discriminant({WedgeFactor{a, l}, WedgeFactor{b, n - l}});
}

double wedge_ratio(std::span<const WedgeFactor> factors, const MetricFrame& frame) {
  return mixed_discriminant(factors) / frame.det();
}

}  // namespace sigmaflow
