#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/geometry.hpp"
#include "sigmaflow/spectral.hpp"

using namespace sigmaflow;
constexpr double pi = std::numbers::pi;

namespace {

FourierMode mode(std::initializer_list<int> wave, double amp, double phase = 0.0) {
  FourierMode m;
  int a = 0;
  for (int w : wave) m.wave[a++] = w;
  m.amplitude = amp;
  m.phase = phase;
  return m;
}

PotentialField field(const TorusGrid& g, std::initializer_list<FourierMode> modes) {
  std::vector<FourierMode> v(modes);
  return PotentialField::from_modes(g, v);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("grid layout") {
    const TorusGrid g(2, 8);
    CHECK(g.size() == 4096);
    CHECK(g.axes() == 4);
    // last axis fastest
    CHECK(g.axis_index(1, 3) == 1);
    CHECK(g.axis_index(8, 2) == 1);
    CHECK(g.coordinate(3, 3) == doctest::Approx(3.0 / 8));
    const TorusGrid reduced(2, 16, 0b0101u);
    CHECK(reduced.size() == 256);
    CHECK(reduced.active_string() == "1010");
    CHECK(reduced.extent(1) == 1);
    CHECK_THROWS_AS(TorusGrid(2, 12), ArgumentError);
    CHECK_THROWS_AS(TorusGrid(2, 4), ArgumentError);
    CHECK_THROWS_AS(TorusGrid(5, 8), ArgumentError);
    CHECK_THROWS_AS(TorusGrid(1, 8, 0b100u), ArgumentError);
    const TorusGrid lifted = g.lifted(1);
    CHECK(lifted.n() == 3);
    CHECK(lifted.size() == g.size());
    CHECK_THROWS_AS(TorusGrid(4, 8, 1u).lifted(1), ArgumentError);
  }

  TEST_CASE("Fourier modes") {
    const TorusGrid g(1, 8);
    const PotentialField f = field(g, {mode({1, 0}, 2.0, -pi / 2)});
    for (std::size_t p = 0; p < g.size(); ++p) {
      CHECK(f[p] == doctest::Approx(2.0 * std::sin(2 * pi * g.coordinate(p, 0))).scale(1.0));
    }
    CHECK_THROWS_AS(field(g, {mode({4, 0}, 1.0)}), ArgumentError);
    CHECK_THROWS_AS(field(TorusGrid(1, 8, 1u), {mode({0, 1}, 1.0)}), ArgumentError);
  }

  TEST_CASE("lift and restrict are inverse") {
    const TorusGrid g(2, 8);
    const PotentialField f = field(g, {mode({1, 0, 0, 1}, 0.3)});
    const PotentialField up = f.lifted(1);
    CHECK(up.grid().n() == 3);
    const PotentialField down = up.restricted(2);
    CHECK(down.grid() == g);
    for (std::size_t p = 0; p < f.size(); ++p) CHECK(down[p] == f[p]);
  }

  TEST_CASE("snapshot round trip is exact") {
    const TorusGrid g(2, 8, 0b1011u);
    PotentialField f = field(g, {mode({1, 1, 0, 2}, 1.0 / 3, 0.1)});
    f[5] = 1e-300;
    f[6] = -0.1;
    std::stringstream s;
    write_snapshot(s, f);
    const PotentialField back = read_snapshot(s);
    CHECK(back.grid() == g);
    for (std::size_t p = 0; p < f.size(); ++p) CHECK(back[p] == f[p]);

    std::istringstream bad("2 8 1111\n0.5\n");
    CHECK_THROWS_AS(read_snapshot(bad), ArgumentError);
    std::istringstream junk("2 8 11x1\n");
    CHECK_THROWS_AS(read_snapshot(junk), ArgumentError);
  }

  TEST_CASE("complex_hessian of a single mode in one dimension") {
    const TorusGrid g(1, 16);
    const PotentialField f = field(g, {mode({1, 0}, 1.0)});
    const HermitianField h = complex_hessian(f);
    for (std::size_t p = 0; p < g.size(); ++p) {
      CHECK(h[p].diag(0) ==
            doctest::Approx(-pi * pi * std::cos(2 * pi * g.coordinate(p, 0))).scale(1.0));
    }
    const HermitianField zero = complex_hessian(PotentialField(g, 3.0));
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(zero[p].max_abs() <= 1e-12);
  }

  TEST_CASE("chi_field eigenvalue of a rank-one perturbation") {
    const TorusGrid g(1, 16);
    const double eps = 0.05;
    Background bg{HermitianMatrix::identity(1), HermitianMatrix::identity(1), std::nullopt, 1, {}};
    const HermitianField chi = chi_field(bg, field(g, {mode({1, 0}, eps)}));
    const EigenRange r = relative_eigen_range(chi, MetricFrame(bg.G));
    CHECK(r.min == doctest::Approx(1 - pi * pi * eps));
    CHECK(r.max == doctest::Approx(1 + pi * pi * eps));
    CHECK_THROWS_AS(chi_field(bg, field(g, {mode({1, 0}, 0.2)})), DegenerateMetric);

    const HermitianField h = chi_field(bg, PotentialField(g));
    for (std::size_t p = 0; p < h.size(); ++p) CHECK(h[p].diag(0) == doctest::Approx(1));
  }

  TEST_CASE("the literal acceptance amplitude is degenerate") {
    // 0.2 sin(2 pi x1) cos(2 pi y2) has ddbar entries of size 0.2 pi^2 > 1.
    const TorusGrid g(2, 16);
    Background bg{HermitianMatrix::identity(2), HermitianMatrix::diagonal({2.0, 1.0}),
                  field(g, {mode({1, 0, 0, 1}, 0.1, -pi / 2), mode({1, 0, 0, -1}, 0.1, -pi / 2)}),
                  1, {}};
    CHECK_THROWS_AS(chi0_field(bg, g), DegenerateMetric);
    bg.psi0 = field(g, {mode({1, 0, 0, 1}, 0.1 / (pi * pi), -pi / 2),
                        mode({1, 0, 0, -1}, 0.1 / (pi * pi), -pi / 2)});
    const EigenRange r = relative_eigen_range(chi0_field(bg, g), MetricFrame(bg.G));
    CHECK(r.min > 0.7);
    CHECK(r.max < 3.3);
  }

  TEST_CASE("integrate") {
    const TorusGrid g(1, 16);
    const HermitianMatrix id = HermitianMatrix::identity(1);
    CHECK(integrate(PotentialField(g, 1.0), id) == doctest::Approx(1));
    CHECK(integrate(field(g, {mode({1, 0}, 1.0)}), id) == doctest::Approx(0).scale(1.0));
    PotentialField sq = field(g, {mode({1, 0}, 1.0)});
    for (double& v : sq.values()) v *= v;
    CHECK(integrate(sq, id) == doctest::Approx(0.5));
    CHECK(integrate(PotentialField(g, 1.0), HermitianMatrix::diagonal({3.0})) ==
          doctest::Approx(3));
  }

  TEST_CASE("class constants") {
    Background id{HermitianMatrix::identity(3), HermitianMatrix::identity(3), std::nullopt, 1, {}};
    const ClassConstants a = class_constants(id);
    for (int k = 0; k <= 3; ++k) {
      CHECK(a.c[k] == doctest::Approx(1));
      CHECK(a.c_prime[k] == doctest::Approx(oracle::sigma_subsets(k, {1, 1, 1})));
    }
    Background d{HermitianMatrix::identity(2), HermitianMatrix::diagonal({2.0, 1.0}), std::nullopt,
                 1, {}};
    const ClassConstants b = class_constants(d);
    CHECK(b.c[1] == doctest::Approx(0.75));
    CHECK(b.c_prime[1] == doctest::Approx(1.5));

    // Cohomology invariance: adding ddbar psi0 leaves the constants alone.
    d.psi0 = field(TorusGrid(2, 16), {mode({1, 0, 0, 0}, 0.05, -pi / 2)});
    const ClassConstants e = class_constants(d);
    CHECK(std::abs(e.c[1] - 0.75) <= 1e-10);
    d.psi0 = field(TorusGrid(2, 16), {mode({1, 0, 0, 1}, 0.02), mode({0, 1, 1, 0}, 0.01, 0.4)});
    const ClassConstants f = class_constants(d);
    CHECK(std::abs(f.c[1] - 0.75) <= 1e-10);
    CHECK(std::abs(f.c[0] - 1.0) <= 1e-10);
  }

  TEST_CASE("oscillation") {
    const TorusGrid g(1, 16);
    CHECK(oscillation(PotentialField(g, 4.0)) == 0);
    CHECK(oscillation(field(g, {mode({1, 0}, 1.0)})) == doctest::Approx(2));
    PotentialField f = field(g, {mode({1, 0}, 0.3)});
    for (double& v : f.values()) v += 0.1;
    CHECK(oscillation(f) == doctest::Approx(0.6));
  }

  TEST_CASE("background validation") {
    Background bad{HermitianMatrix::identity(2), HermitianMatrix::identity(2), std::nullopt, 3, {}};
    CHECK_THROWS_AS(validate(bad), ArgumentError);
    bad.k = 1;
    bad.augment = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(bad), ArgumentError);
    bad.augment = {-1.0};
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad.augment = {};
    bad.G = HermitianMatrix::diagonal({1.0, -1.0});
    CHECK_THROWS_AS(validate(bad), DomainError);

    Background aug{HermitianMatrix::identity(2), HermitianMatrix::diagonal({2.0, 1.0}),
                   std::nullopt, 1, {0.5}};
    const Background l = lift_augmented(aug);
    CHECK(l.n() == 3);
    CHECK(l.H.diag(2) == 0.5);
    CHECK(l.G.diag(2) == 1.0);
    CHECK(l.augment.empty());
  }
}
