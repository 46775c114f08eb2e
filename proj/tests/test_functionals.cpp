#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/functionals.hpp"
#include "sigmaflow/random.hpp"
#include "sigmaflow/symfun.hpp"

using namespace sigmaflow;
constexpr double pi = std::numbers::pi;

namespace {

PotentialField modes(const TorusGrid& g, Rng& rng, int count, double amp) {
  std::vector<FourierMode> m(count);
  for (FourierMode& f : m) {
    for (int a = 0; a < g.axes(); ++a)
      if (g.active(a)) f.wave[a] = rng.integer(-2, 2);
    f.amplitude = amp * rng.uniform(-1, 1);
    f.phase = rng.uniform(0, 2 * pi);
  }
  return PotentialField::from_modes(g, m);
}

Background curved(const TorusGrid& g, int k) {
  Rng rng(41, 0, 0);
  const int n = g.n();
  Background bg{random_positive_hermitian(rng, n, 0.8, 1.5),
                random_positive_hermitian(rng, n, 1.0, 2.0), modes(g, rng, 2, 0.003), k, {}};
  return bg;
}

PotentialField constant(const TorusGrid& g, double v) { return PotentialField(g, v); }

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("constant potentials") {
    const TorusGrid g(2, 8);
    const Background flat{HermitianMatrix::identity(2), HermitianMatrix::identity(2), std::nullopt,
                          1, {}};
    CHECK(F_j(constant(g, 0.7), 2, flat).value == doctest::Approx(1.4));
    for (int j = 0; j <= 2; ++j) CHECK(F_j(PotentialField(g), j, flat).value == 0);

    const Background bg = curved(g, 1);
    for (int j = 0; j <= 2; ++j) {
      CHECK(std::abs(F_tilde(constant(g, 0.3), j, bg)) <= 1e-12);
      CHECK(F_tilde(PotentialField(g), j, bg) == 0);
    }
    CHECK(std::abs(F_tilde_alpha(constant(g, 0.3), 1, 1.0, bg)) <= 1e-12);
    CHECK(F_tilde_alpha(PotentialField(g), 1, 0.5, bg) == 0);
  }

  TEST_CASE("alpha -> 0 recovers F~_{n-k}") {
    const TorusGrid g(2, 8);
    const Background bg = curved(g, 1);
    Rng rng(42, 0, 0);
    const PotentialField phi = modes(g, rng, 3, 0.002);
    CHECK(F_tilde_alpha(phi, 1, 0.0, bg) == doctest::Approx(F_tilde(phi, 1, bg)));
  }

  TEST_CASE("mass") {
    const TorusGrid g(2, 8);
    const Background flat{HermitianMatrix::identity(2), HermitianMatrix::identity(2), std::nullopt,
                          1, {}};
    CHECK(mu_mass(PotentialField(g), 1, flat) == doctest::Approx(2));
    const Background bg = curved(g, 1);
    Rng rng(43, 0, 0);
    const double m0 = mu_mass(PotentialField(g), 1, bg);
    for (int trial = 0; trial < 5; ++trial) {
      const double m = mu_mass(modes(g, rng, 3, 0.002), 1, bg);
      CHECK(std::abs(m - m0) <= 1e-12 * m0);
    }
  }

  TEST_CASE("normalize") {
    const TorusGrid g(2, 8);
    const Background bg = curved(g, 1);
    const PotentialField hat = normalize(constant(g, 1.7), 1, bg);
    CHECK(std::abs(F_j(hat, 1, bg).value) <= 1e-10);
    Rng rng(44, 0, 0);
    const PotentialField hat2 = normalize(modes(g, rng, 3, 0.002), 1, bg);
    CHECK(std::abs(F_j(hat2, 1, bg).value) <= 1e-10);
  }

  TEST_CASE("path independence: closed form vs quadrature along s^2 phi") {
    for (int n = 1; n <= 3; ++n) {
      const TorusGrid g(n, 8, n == 3 ? 0b010101u : (1u << (2 * n)) - 1);
      const Background bg = curved(g, 1);
      const Energy e(bg, g);
      Rng rng(45, n, 0);
      const PotentialField phi = modes(g, rng, 3, 0.002);
      for (int j = 0; j <= n; ++j) {
        const double closed = e.F(phi, j).value;
        CHECK(std::abs(closed - e.F_quadrature(phi, j)) <= 1e-8 * std::max(1.0, std::abs(closed)));
      }
    }
  }

  TEST_CASE("cocycle: F~(0 -> 1) + F~(1 -> 2) = F~(0 -> 2)") {
    const TorusGrid g(2, 8);
    const Background bg0 = curved(g, 1);
    Rng rng(46, 0, 0);
    const PotentialField phi1 = modes(g, rng, 3, 0.002);
    const PotentialField phi2 = modes(g, rng, 3, 0.002);
    Background bg1 = bg0;
    bg1.psi0->axpy(1.0, phi1);
    PotentialField step = phi2;
    step.axpy(-1.0, phi1);
    for (int j = 0; j <= 2; ++j) {
      const double direct = F_tilde(phi2, j, bg0);
      const double split = F_tilde(phi1, j, bg0) + F_tilde(step, j, bg1);
      CHECK(std::abs(direct - split) <= 1e-8);
    }
  }

  TEST_CASE("first variation against centered differences") {
    const TorusGrid g(2, 8);
    const Background bg = curved(g, 1);
    Rng rng(47, 0, 0);
    const PotentialField phi = modes(g, rng, 3, 0.002);
    // Three resonant modes, so that int delta (ddbar delta)^2 does not vanish.
    std::vector<FourierMode> tri(3);
    tri[0].wave = {1, 0, 0, 0};
    tri[1].wave = {0, 0, 0, 1};
    tri[2].wave = {1, 0, 0, 1};
    for (FourierMode& m : tri) m.amplitude = 0.5;
    const PotentialField delta = PotentialField::from_modes(g, tri);
    CHECK(variation_gap(phi, PotentialField(g), 2, bg, 1e-4) == 0);
    for (int j = 0; j <= 2; ++j) CHECK(variation_gap(phi, constant(g, 0.4), j, bg, 1e-4) <= 1e-8);

    // F_2 is cubic in phi, so the centered-difference error is exactly h^2 F'''/6.
    const double g1 = variation_gap(phi, delta, 2, bg, 1e-3);
    const double g2 = variation_gap(phi, delta, 2, bg, 5e-4);
    CHECK(g1 / g2 >= 3.5);
    CHECK(g1 / g2 <= 4.5);
    CHECK_THROWS_AS(variation_gap(phi, delta, 2, bg, 1.0), ArgumentError);
  }

  TEST_CASE("Euler-Lagrange variation vanishes at the constant solution") {
    const TorusGrid g(2, 8);
    const Background bg{HermitianMatrix::identity(2), HermitianMatrix::diagonal({2.0, 1.0}),
                        std::nullopt, 1, {}};
    Rng rng(48, 0, 0);
    const PotentialField delta = modes(g, rng, 3, 1.0);
    CHECK(std::abs(euler_lagrange_variation(PotentialField(g), delta, 1, bg)) <= 1e-12);
  }

  TEST_CASE("Hoelder gap") {
    const TorusGrid g(2, 8, 0b0101u);
    Rng rng(49, 0, 0);
    for (int k = 1; k <= 2; ++k) {
      HermitianField chi(g, HermitianMatrix(2));
      for (std::size_t p = 0; p < chi.size(); ++p) chi[p] = random_positive_hermitian(rng, 2, 0.5, 2);
      double top = 0, bottom = 0;
      for (std::size_t p = 0; p < chi.size(); ++p) {
        const RealTuple ev = eigvals(chi[p]);
        top += sigma(2 - k, ev.span());
        bottom += sigma(2, ev.span());
      }
      const HolderGap h = holder_gap(chi, HermitianMatrix::identity(2), k, top / bottom);
      CHECK(h.lhs >= h.rhs * (1 - 1e-12));
      const HolderGap flat = holder_gap(HermitianField(g, HermitianMatrix::diagonal({2.0, 1.0})),
                                        HermitianMatrix::identity(2), k,
                                        k == 1 ? 1.5 : 0.5);
      CHECK(flat.lhs == doctest::Approx(flat.rhs));
    }
  }
}
