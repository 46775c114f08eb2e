#include "sigmaflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sigmaflow/cone.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/functionals.hpp"
#include "sigmaflow/geometry.hpp"
#include "sigmaflow/random.hpp"

namespace sigmaflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A trial reports how far it went past its bound, already divided by the
// tolerance: > 1 is a failure.
using Trial = std::function<double(Rng&)>;

struct Check {
  const char* name;
  const char* citation;
  Trial trial;
};

RealTuple random_list(Rng& rng, int n) {
  RealTuple v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.log_uniform(1e-2, 1e2);
  return v;
}

HermitianMatrix from_real(const RealMatrix& m) {
  HermitianMatrix h(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) h.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return h;
}

double sigma_inverse(const HermitianMatrix& a, int k) {
  const RealTuple ev = eigvals(a);
  const Sigmas s(ev.span());
  return s[a.dim() - k] / s[a.dim()];
}

double ratio(double value, double tol) { return value / tol; }

std::vector<Check> build_checks() {
  std::vector<Check> checks;

  checks.push_back({"fischer", "det A <= det A_I det A_complement for positive A", [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const HermitianMatrix a = random_positive_hermitian(rng, n);
                      const unsigned mask = 1u + static_cast<unsigned>(rng.integer(0, (1 << n) - 3));
                      FixedVec<int, kMaxDim> idx;
                      for (int i = 0; i < n; ++i)
                        if (mask & (1u << i)) idx.push_back(i);
                      const MinorDets d = minor_dets(a, idx.span());
                      const double bound = d.det_i * d.det_complement;
                      return ratio((d.det_a - bound) / bound, 1e-12);
                    }});

  checks.push_back({"hadamard", "det A <= product of diagonal entries for positive A",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const HermitianMatrix a = random_positive_hermitian(rng, n);
                      const double gap = diag_sigma_gap(a, n);
                      return ratio(-gap / sigma_inverse(a, n), 1e-10);
                    }});

  checks.push_back({"diag_sigma", "sigma_k(diag(A)^{-1}) <= sigma_k(A^{-1}) for positive A",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const HermitianMatrix a = random_positive_hermitian(rng, n);
                      return ratio(-diag_sigma_gap(a, k) / sigma_inverse(a, k), 1e-10);
                    }});

  checks.push_back({"garding", "Garding inequality for sigma_k on the positive cone",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const RealTuple mu = random_list(rng, n);
                      const RealTuple tau = random_list(rng, n);
                      double lhs = 0.0;
                      for (int j = 0; j < n; ++j) {
                        const int ex[] = {j};
                        lhs += tau[j] * sigma_without(k - 1, mu.span(), ex);
                      }
                      lhs /= k;
                      const double gap = garding_gap(mu.span(), tau.span(), k);
                      return ratio(-gap / lhs, 1e-10);
                    }});

  checks.push_back({"glz", "log sigma_k quadratic form with the g_i/lambda_i correction is nonnegative",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const EigenList lambda(random_list(rng, n).span());
                      FixedVec<cplx, kMaxDim> xi;
                      for (int i = 0; i < n; ++i) xi.push_back(rng.complex_normal());
                      const QuadraticFormValue q = glz_quadratic_form(lambda, k, xi.span());
                      return ratio(-q.value / q.magnitude, 1e-10);
                    }});

  checks.push_back({"concavity_psd", "g_ij + g_i/lambda_j delta_ij >= 0 for g = sigma_k^{1/k}",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const EigenList lambda(random_list(rng, n).span());
                      const RealMatrix m = concavity_matrix(lambda, k);
                      return ratio(-min_eigenvalue(from_real(m)) / m.frobenius_norm(), 1e-10);
                    }});

  checks.push_back({"f_correction_nsd",
                    "f_ij + f_i/chi_j delta_ij <= 0 for f = -(sigma_{n-k}/sigma_n)^{1/k}",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const EigenList chi(random_list(rng, n).span());
                      const RealMatrix m = f_correction_matrix(chi, k);
                      return ratio(eigvals(from_real(m))[0] / m.frobenius_norm(), 1e-10);
                    }});

  checks.push_back({"hessian_pair_negative", "F^{i jbar, j ibar} < 0 for i != j", [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const EigenList chi(random_list(rng, n).span());
                      const int i = rng.integer(0, n - 1);
                      int j = rng.integer(0, n - 2);
                      if (j >= i) ++j;
                      const RealTuple grad = F_gradient(chi, k);
                      const double scale = grad[i] / chi[i] + grad[j] / chi[j];
                      const double v = F_hessian_pair(chi, k, i, j);
                      // strict sign: any nonnegative value fails
                      return v >= 0.0 ? kInf : v / scale;
                    }});

  checks.push_back({"y_group_identity",
                    "second-group expression equals -sigma_n sigma_{n-k-1}(chi|1,j) <= 0",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n - 1);
                      const EigenList chi(random_list(rng, n).span());
                      const int j = rng.integer(1, n - 1);
                      const YGroupTerms t = y_group_gap(chi, k, j);
                      if (t.rhs > 0.0) return kInf;
                      return ratio(std::abs(t.lhs - t.rhs) / std::abs(t.rhs), 1e-10);
                    }});

  checks.push_back({"minor_decomposition",
                    "A_ii = sigma_{k;i}, A_ij = sigma_{k;ij} equals sum_{|I|=k} lambda_I E_I and is PSD",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const EigenList lambda(random_list(rng, n).span());
                      const MinorDecomposition d = appendix_a_matrix(lambda, k);
                      const double psd = -min_eigenvalue(from_real(d.a)) / d.a.frobenius_norm();
                      return std::max(ratio(d.relative_residual, 1e-12), ratio(psd, 1e-10));
                    }});

  checks.push_back({"sigma_inverse_convexity", "A -> sigma_k(A^{-1}) is midpoint convex",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const HermitianMatrix a = random_positive_hermitian(rng, n);
                      const HermitianMatrix b = random_positive_hermitian(rng, n);
                      const double mid = sigma_inverse(0.5 * (a + b), k);
                      const double avg = 0.5 * (sigma_inverse(a, k) + sigma_inverse(b, k));
                      return ratio((mid - avg) / avg, 1e-10);
                    }});

  checks.push_back({"newton_chain", "chi^{n-j} ^ omega^j ratio chain is nonincreasing",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const EigenList chi(random_list(rng, n).span());
                      const std::vector<double> gaps = newton_chain_gaps(chi);
                      const Sigmas s(chi.values());
                      double worst = -kInf;
                      for (int j = 1; j < n; ++j) {
                        const double wj = s[n - j] / binomial(n, j);
                        const double wprev = s[n - j + 1] / binomial(n, j - 1);
                        worst = std::max(worst, -gaps[j - 1] / (wj / wprev));
                      }
                      return ratio(worst, 1e-12);
                    }});

  checks.push_back({"holder", "int q^{1/k} chi^{n-k} ^ omega^k >= c'^{1/k} int chi^{n-k} ^ omega^k",
                    [](Rng& rng) {
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      const TorusGrid grid(n, 8, 1u);
                      HermitianField chi(grid, HermitianMatrix(n));
                      const MetricFrame frame(HermitianMatrix::identity(n));
                      double top = 0.0, bottom = 0.0;
                      for (std::size_t p = 0; p < chi.size(); ++p) {
                        chi[p] = random_positive_hermitian(rng, n);
                        const Sigmas s(eigvals(chi[p]).span());
                        top += s[n - k];
                        bottom += s[n];
                      }
                      const HolderGap g = holder_gap(chi, HermitianMatrix::identity(n), k, top / bottom);
                      return ratio((g.rhs - g.lhs) / g.lhs, 1e-10);
                    }});

  checks.push_back({"large_ratio_gap",
                    "(1-eps) sum F^{ii} chi'_ii >= c'^{-1/k} sigma_k(chi^{-1})^{2/k} once chi_1/chi_n >= N",
                    [](Rng& rng) {
                      constexpr double theta = 0.1;
                      const int n = rng.integer(2, 4);
                      const int k = rng.integer(1, n);
                      // Constant chi' (so c' = sigma_k(chi'^{-1})), redrawn until theta fits.
                      HermitianMatrix chi_prime;
                      TheoremConstants tc;
                      const double c1 = rng.log_uniform(0.1, 10.0);
                      const double c2 = c1 * rng.log_uniform(1.0, 10.0);
                      const TorusGrid point(n, 8, 0u);
                      for (int attempt = 0;; ++attempt) {
                        chi_prime = random_positive_hermitian(rng, n, 0.1, 10.0);
                        Background bg{HermitianMatrix::identity(n), chi_prime, std::nullopt, k, {}};
                        try {
                          tc = theorem_constants(HermitianField(point, chi_prime), bg, k, c1, c2, theta);
                          break;
                        } catch (const ArgumentError&) {
                          if (attempt > 1000) throw;
                        }
                      }
                      // chi with chi_1/chi_n log-uniform in [N, 100 N], rescaled into [C1, C2].
                      const double r = rng.log_uniform(tc.N_sufficient, 100.0 * tc.N_sufficient);
                      RealTuple chi(n);
                      chi[0] = r;
                      chi[n - 1] = 1.0;
                      for (int i = 1; i < n - 1; ++i) chi[i] = rng.log_uniform(1.0, r);
                      std::sort(chi.begin(), chi.end(), std::greater<>());
                      RealTuple inv(n);
                      for (int i = 0; i < n; ++i) inv[i] = 1.0 / chi[i];
                      const double target = rng.log_uniform(c1, c2);
                      const double t = std::pow(sigma(k, inv.span()) / target, 1.0 / k);
                      for (double& v : chi) v *= t;
                      const HermitianMatrix in_frame = congruence(chi_prime, random_unitary(rng, n));
                      const EigenList chi_list(chi.span());
                      const double gap = theorem_gap(chi_list, in_frame, k, tc.epsilon, tc.c_prime);
                      for (int i = 0; i < n; ++i) inv[i] = 1.0 / chi_list[i];
                      const double scale =
                          std::pow(tc.c_prime, -1.0 / k) * std::pow(sigma(k, inv.span()), 2.0 / k);
                      return ratio(-gap / scale, 1e-10);
                    }});

  return checks;
}

}  // namespace

std::size_t SuiteReport::failures() const noexcept {
  std::size_t f = 0;
  for (const CheckResult& c : checks) f += c.failures;
  return f;
}

SuiteReport run_property_suite(std::uint64_t seed, std::size_t trials, SuiteOptions options) {
  if (trials < 1) throw ArgumentError("run_property_suite: trials must be at least 1");
  const std::vector<Check> checks = build_checks();
  // A corrupted run compares every excess against -inf, so each trial fails.
  const double limit = options.corrupt_tolerance ? -kInf : 1.0;

  SuiteReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    CheckResult res;
    res.name = checks[c].name;
    res.citation = checks[c].citation;
    res.trials = trials;
    res.seed = seed;
    res.worst_violation = -kInf;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, c, t);
      double excess;
      try {
        excess = checks[c].trial(rng);
      } catch (const std::exception&) {
        excess = kInf;
      }
      if (std::isnan(excess)) excess = kInf;
      res.worst_violation = std::max(res.worst_violation, excess);
      if (excess > limit) ++res.failures;
    }
    report.checks.push_back(res);
  }
  return report;
}

std::vector<double> newton_chain_gaps(const EigenList& chi) {
  const int n = chi.size();
  if (n < 2) throw ArgumentError("newton_chain_gaps: need n >= 2");
  const Sigmas s(chi.values());
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = s[n - j] / binomial(n, j);
  std::vector<double> gaps;
  for (int j = 1; j < n; ++j) gaps.push_back(w[j] / w[j - 1] - w[j + 1] / w[j]);
  return gaps;
}

double hodge_expansion_gap(const HermitianMatrix& a, int n) {
  if (n < 3) throw ArgumentError("hodge_expansion_gap: need n >= 3");
  if (a.dim() != n) throw ArgumentError("hodge_expansion_gap: matrix dimension differs from n");
  const HermitianMatrix omega = HermitianMatrix::identity(n);
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  // Unit volume: int form = n! * (form / omega^n).
  const double linear = nfact * wedge_ratio(a, 1, omega);
  const double volume = nfact * wedge_ratio(a, 0, omega);
  const double quadratic = nfact * wedge_ratio(a, 2, omega);
  return linear * linear - volume * quadratic;
}

double hodge_class_defect(const HermitianMatrix& a, double eps) {
  const int n = a.dim();
  Background bg{HermitianMatrix::identity(n), HermitianMatrix::identity(n) + eps * a,
                std::nullopt, 1, {}};
  const ClassConstants cc = class_constants(bg);
  return cc.c[1] * cc.c[1] - cc.c[2];
}

}  // namespace sigmaflow
