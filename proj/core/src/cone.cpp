#include "sigmaflow/cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/parallel.hpp"

namespace sigmaflow {

namespace {

struct PointWorst {
  double value = -std::numeric_limits<double>::infinity();  // max_j sigma_k(... | j)
  int j = 0;
  double min_eig = 0.0;
};

// Largest exclusion value sigma_k(r | j) over j < n_excludable, where r holds
// reciprocals of the pencil eigenvalues followed by any extra entries.
PointWorst worst_exclusion(const RealTuple& mu, std::span<const double> extra, int k,
                           int n_excludable) {
  RealTuple r;
  for (double m : mu) r.push_back(1.0 / m);
  for (double b : extra) r.push_back(1.0 / b);
  PointWorst w;
  w.min_eig = mu[mu.size() - 1];
  for (int j = 0; j < n_excludable; ++j) {
    const int ex[] = {j};
    const double v = sigma_without(k, r.span(), ex);
    if (v > w.value) {
      w.value = v;
      w.j = j;
    }
  }
  return w;
}

ConeReport scan(const HermitianField& chi_prime, const Background& bg, int k, double c,
                std::span<const double> extra) {
  const int n = bg.n();
  const MetricFrame frame(bg.G);
  const std::size_t size = chi_prime.size();
  std::vector<PointWorst> worst(size);
  configure_threads();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(size); ++p) {
    const RealTuple mu = frame.eigvals(chi_prime[static_cast<std::size_t>(p)]);
    worst[p] = mu[n - 1] > kPositivityFloor ? worst_exclusion(mu, extra, k, n) : PointWorst{0, 0, mu[n - 1]};
  }

  ConeReport rep;
  for (std::size_t p = 0; p < size; ++p) {
    if (!(worst[p].min_eig > kPositivityFloor)) {
      throw DegenerateMetric("chi' is degenerate at grid point " + std::to_string(p), p,
                             worst[p].min_eig);
    }
    const double m = c - worst[p].value;
    if (p == 0 || m < rep.margin) {
      rep.margin = m;
      rep.worst_point = p;
      rep.worst_j = worst[p].j;
    }
  }
  rep.in_cone = rep.margin > 0.0;
  return rep;
}

}  // namespace

ConeReport cone_margin(const HermitianField& chi_prime, const Background& bg, int k,
                       double c_prime) {
  const int n = bg.n();
  if (k < 1 || k > n) throw ArgumentError("cone_margin: k outside [1, n]");
  if (chi_prime.size() > 0 && chi_prime[0].dim() != n) {
    throw ArgumentError("cone_margin: chi' dimension differs from the background");
  }
  if (k == n) {
    // Every positive form is in C_n. Still reject degenerate input.
    scan(chi_prime, bg, k, c_prime, {});
    return ConeReport{};
  }
  return scan(chi_prime, bg, k, c_prime, {});
}

ConeReport cone_margin_augmented(const HermitianField& chi_prime, const Background& bg, int k,
                                 double c) {
  if (bg.augment.empty()) throw ArgumentError("cone_margin_augmented: augmentation list is empty");
  const int n = bg.n();
  const int total = n + static_cast<int>(bg.augment.size());
  if (k < 1 || k > total) throw ArgumentError("cone_margin_augmented: k outside [1, n + p]");
  return scan(chi_prime, bg, k, c, bg.augment);
}

// Where the sufficient constants come from. Work in a frame where chi is
// diagonal (chi_1 >= ... >= chi_n relative to omega) and write
// B = diag(chi'_ii / chi_i^2).
//
// chi_n >= delta: Garding gives sum F^{ii} chi'_ii >= sigma_k(B)^{1/k}. The
// principal submatrix chi'|1 satisfies sigma_k((chi'|1)^{-1}) <= c - eta (by
// interlacing the eigenframe maximum bounds every frame), and with the
// diagonal comparison and Cauchy-Schwarz
//   c sigma_k(B) >= c/(c - eta) * sigma_k(chi^{-1} | 1)^2.
// sigma_k(chi^{-1}|1) >= (1 - x) sigma_k(chi^{-1}) with
// x <= C(n-1,k-1) / (C1 delta^k chi_1/chi_n). Requiring
//   (1 - eps) (c/(c - eta))^{1/k} (1 - x)^{2/k} >= 1,  1 - eps = 1/(1 + theta),
// gives 1 - x >= (1+theta)^{k/2} sqrt((c - eta)/c), hence N below.
//
// chi_n < delta: sum F^{ii} chi'_ii >= lambda sum F^{ii} >=
// (lambda/n) sigma_k^{1/k}(chi^{-1}) / chi_n, which beats
// c^{-1/k} sigma_k^{2/k} / (1 - eps) once delta = (1-eps) lambda (c/C2)^{1/k} / n.
TheoremConstants theorem_constants(const HermitianField& chi_prime, const Background& bg, int k,
                                   double C1, double C2, double theta) {
  const int n = bg.n();
  if (k < 1 || k > n) throw ArgumentError("theorem_constants: k outside [1, n]");
  if (!(C1 > 0.0) || !(C2 >= C1)) throw ArgumentError("theorem_constants: need 0 < C1 <= C2");
  if (!(theta > 0.0)) throw ArgumentError("theorem_constants: theta must be positive");

  TheoremConstants tc;
  tc.c_prime = class_constants(bg).c_prime[k];
  const double c = tc.c_prime;

  const MetricFrame frame(bg.G);
  tc.lambda = relative_eigen_range(chi_prime, frame).min;
  if (!(tc.lambda > kPositivityFloor)) throw DomainError("theorem_constants: chi' is degenerate");

  const ConeReport cone = scan(chi_prime, bg, k, c, {});
  if (!(cone.margin > 0.0)) throw DomainError("theorem_constants: chi' is not in the cone");
  tc.eta = cone.margin;
  tc.epsilon = theta / (1.0 + theta);

  const double ratio = (c - tc.eta) / c;
  const double binom = binomial(n - 1, k - 1);

  const double naive = std::sqrt(1.0 + theta) * ratio;
  if (!(naive < 1.0)) {
    throw ArgumentError("theorem_constants: theta too large, need (1+theta)^{1/2}(c-eta)/c < 1");
  }
  tc.delta = tc.lambda * std::pow(C1 * c, 1.0 / k);
  tc.N = binom / (C1 * std::pow(tc.delta, k)) / (1.0 - naive);

  const double sufficient = std::pow(1.0 + theta, 0.5 * k) * std::sqrt(ratio);
  if (!(sufficient < 1.0)) {
    throw ArgumentError(
        "theorem_constants: theta too large, need (1+theta)^{k/2} sqrt((c-eta)/c) < 1");
  }
  tc.delta_sufficient = (1.0 - tc.epsilon) * tc.lambda * std::pow(c / C2, 1.0 / k) / n;
  tc.N_sufficient = binom / (C1 * std::pow(tc.delta_sufficient, k)) / (1.0 - sufficient);
  return tc;
}

double theorem_gap(const EigenList& chi, const HermitianMatrix& chi_prime_point, int k,
                   double epsilon, double c_prime) {
  const int n = chi.size();
  if (chi_prime_point.dim() != n) throw ArgumentError("theorem_gap: dimension mismatch");
  const RealTuple grad = F_gradient(chi, k);
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) lhs += grad[i] * chi_prime_point.diag(i);
  RealTuple inv;
  for (double v : chi.values()) inv.push_back(1.0 / v);
  const double sk = sigma(k, inv.span());
  return (1.0 - epsilon) * lhs - std::pow(c_prime, -1.0 / k) * std::pow(sk, 2.0 / k);
}

}  // namespace sigmaflow
