#include "sigmaflow/functionals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/parallel.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct GaussLegendre16 {
  std::array<double, 16> node{};    // on [0, 1]
  std::array<double, 16> weight{};  // sums to 1

  GaussLegendre16() {
    constexpr int m = 16;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int r = 2; r <= m; ++r) {
          const double p2 = ((2 * r - 1) * x * p1 - (r - 1) * p0) / r;
          p0 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      node[i] = 0.5 * (1.0 - x);
      weight[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/(...) halved for [0,1]
    }
  }
};

const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule;
  return rule;
}

}  // namespace

Energy::Energy(const Background& bg, const TorusGrid& grid)
    : bg_(bg),
      grid_(grid),
      frame_(bg.G),
      hessian_(std::make_shared<SpectralHessian>(grid)),
      chi0_(chi0_field(bg, grid)),
      constants_(class_constants(bg)) {
  if (grid.n() != bg.n()) throw ArgumentError("Energy: grid dimension differs from background");
}

HermitianField Energy::chi(const PotentialField& phi) const {
  if (!(phi.grid() == grid_)) throw ArgumentError("Energy: potential lives on a different grid");
  HermitianField out = hessian_->apply(phi);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] += chi0_[p];
  const EigenRange r = relative_eigen_range(out, frame_);
  if (!(r.min > kPositivityFloor)) {
    throw DegenerateMetric("chi_phi is degenerate at grid point " + std::to_string(r.argmin),
                           r.argmin, r.min);
  }
  return out;
}

double Energy::wedge_integral(std::span<const double> weight, const HermitianField& chi, int a,
                              int b) const {
  const int n = bg_.n();
  if (a < 0 || b < 0 || a + b > n) throw ArgumentError("wedge_integral: bad form degrees");
  const std::size_t size = grid_.size();
  std::vector<double> values(size);
  configure_threads();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(size); ++p) {
    const std::size_t q = static_cast<std::size_t>(p);
    const WedgeFactor factors[] = {{chi[q], a}, {chi0_[q], b}, {bg_.G, n - a - b}};
    const double d = mixed_discriminant(factors);
    values[q] = weight.empty() ? d : weight[q] * d;
  }
  // n! * mean(D) = n! det G * mean(form / omega^n)
  return factorial(n) * neumaier_sum(values) / static_cast<double>(size);
}

FunctionalValue Energy::F(const PotentialField& phi, const HermitianField& chi, int j) const {
  const int n = bg_.n();
  if (j < 0 || j > n) throw ArgumentError("F_j: j outside [0, n]");
  FunctionalValue out;
  out.j = j;
  NeumaierSum sum;
  for (int l = 0; l <= j; ++l) {
    out.decomposition.push_back(wedge_integral(phi.values(), chi, l, j - l));
    sum.add(out.decomposition.back());
  }
  out.value = sum.value() / (j + 1);
  return out;
}

FunctionalValue Energy::F(const PotentialField& phi, int j) const { return F(phi, chi(phi), j); }

double Energy::F_tilde(const PotentialField& phi, const HermitianField& chi, int j) const {
  const int n = bg_.n();
  return F(phi, chi, j).value - constants_.c[n - j] * F(phi, chi, n).value;
}

double Energy::F_tilde_alpha(const PotentialField& phi, const HermitianField& chi, int k,
                             double alpha) const {
  const int n = bg_.n();
  if (k < 1 || k > n) throw ArgumentError("F_tilde_alpha: k outside [1, n]");
  if (!(alpha >= 0.0)) throw ArgumentError("F_tilde_alpha: alpha must be nonnegative");
  return F_tilde(phi, chi, n - k) + alpha * F_tilde(phi, chi, n - k + 1);
}

double Energy::mu_mass(const HermitianField& chi, int k) const {
  const int n = bg_.n();
  if (k < 0 || k > n) throw ArgumentError("mu_mass: k outside [0, n]");
  NeumaierSum sum;
  for (int l = 0; l <= n - k; ++l) sum.add(wedge_integral({}, chi, l, n - k - l));
  return sum.value() / (n - k + 1);
}

double Energy::first_variation(const HermitianField& chi, std::span<const double> delta,
                               int j) const {
  if (delta.size() != grid_.size()) throw ArgumentError("first_variation: size mismatch");
  return wedge_integral(delta, chi, j, 0);
}

double Energy::F_quadrature(const PotentialField& phi, int j) const {
  const auto& rule = gauss_legendre16();
  NeumaierSum sum;
  for (int q = 0; q < 16; ++q) {
    const double s = rule.node[q];
    PotentialField path(grid_);
    path.axpy(s * s, phi);
    PotentialField velocity(grid_);
    velocity.axpy(2.0 * s, phi);
    const HermitianField c = chi(path);
    sum.add(rule.weight[q] * first_variation(c, velocity.values(), j));
  }
  return sum.value();
}

// ---------------------------------------------------------------------------

FunctionalValue F_j(const PotentialField& phi, int j, const Background& bg) {
  return Energy(bg, phi.grid()).F(phi, j);
}

double F_tilde(const PotentialField& phi, int j, const Background& bg) {
  const Energy e(bg, phi.grid());
  return e.F_tilde(phi, e.chi(phi), j);
}

double F_tilde_alpha(const PotentialField& phi, int k, double alpha, const Background& bg) {
  const Energy e(bg, phi.grid());
  return e.F_tilde_alpha(phi, e.chi(phi), k, alpha);
}

double mu_mass(const PotentialField& phi, int k, const Background& bg) {
  const Energy e(bg, phi.grid());
  return e.mu_mass(e.chi(phi), k);
}

PotentialField normalize(const PotentialField& phi, int k, const Background& bg) {
  const Energy e(bg, phi.grid());
  const HermitianField chi = e.chi(phi);
  const int n = bg.n();
  const double shift = e.F(phi, chi, n - k).value / e.mu_mass(chi, k);
  PotentialField out = phi;
  for (double& v : out.values()) v -= shift;
  return out;
}

double variation_gap(const PotentialField& phi, const PotentialField& delta, int j,
                     const Background& bg, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw ArgumentError("variation_gap: h outside [1e-7, 1e-3]");
  const Energy e(bg, phi.grid());
  PotentialField plus = phi, minus = phi;
  plus.axpy(h, delta);
  minus.axpy(-h, delta);
  const double fd = (e.F(plus, j).value - e.F(minus, j).value) / (2.0 * h);
  return std::abs(fd - e.first_variation(e.chi(phi), delta.values(), j));
}

double euler_lagrange_variation(const PotentialField& phi, const PotentialField& delta, int k,
                                const Background& bg) {
  const Energy e(bg, phi.grid());
  const HermitianField chi = e.chi(phi);
  const int n = bg.n();
  return e.first_variation(chi, delta.values(), n - k) -
         e.constants().c[k] * e.first_variation(chi, delta.values(), n);
}

HolderGap holder_gap(const HermitianField& chi, const HermitianMatrix& G, int k, double c_prime) {
  const MetricFrame frame(G);
  const std::size_t size = chi.size();
  if (size == 0) throw ArgumentError("holder_gap: empty field");
  const int n = G.dim();
  if (k < 1 || k > n) throw ArgumentError("holder_gap: k outside [1, n]");
  std::vector<double> weighted(size), plain(size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(size); ++p) {
    const RealTuple ev = frame.eigvals(chi[static_cast<std::size_t>(p)]);
    const Sigmas s(ev.span());
    plain[p] = s[n - k] / binomial(n, k);
    weighted[p] = std::pow(s[n - k] / s[n], 1.0 / k) * plain[p];
  }
  const double scale = factorial(n) * frame.det() / static_cast<double>(size);
  HolderGap out;
  out.lhs = scale * neumaier_sum(weighted);
  out.rhs = std::pow(c_prime, 1.0 / k) * scale * neumaier_sum(plain);
  return out;
}

}  // namespace sigmaflow
