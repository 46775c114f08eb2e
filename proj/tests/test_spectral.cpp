#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sigmaflow/geometry.hpp"
#include "sigmaflow/random.hpp"
#include "sigmaflow/spectral.hpp"

using namespace sigmaflow;
constexpr double pi = std::numbers::pi;

namespace {

// Analytic ddbar of sum_m A_m cos(2 pi <w_m, x> + p_m) in the convention
// phi_{i jbar} = (phi_{xi xj} + phi_{yi yj})/4 + i (phi_{xi yj} - phi_{yi xj})/4.
HermitianMatrix analytic(const TorusGrid& g, const std::vector<FourierMode>& modes,
                         std::size_t p) {
  const int n = g.n();
  ComplexMatrix m(n);
  for (const FourierMode& f : modes) {
    double arg = f.phase;
    for (int a = 0; a < g.axes(); ++a) arg += 2 * pi * f.wave[a] * g.coordinate(p, a);
    const double v = -4 * pi * pi * f.amplitude * std::cos(arg);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double xx = f.wave[2 * i] * f.wave[2 * j];
        const double yy = f.wave[2 * i + 1] * f.wave[2 * j + 1];
        const double xy = f.wave[2 * i] * f.wave[2 * j + 1];
        const double yx = f.wave[2 * i + 1] * f.wave[2 * j];
        m(i, j) += v * cplx(xx + yy, xy - yx) / 4.0;
      }
  }
  return HermitianMatrix::hermitian_part(m);
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("ddbar of random low modes matches the analytic derivative") {
    Rng rng(21, 0, 0);
    for (int trial = 0; trial < 12; ++trial) {
      const int n = rng.integer(1, 3);
      const TorusGrid g(n, 8);
      std::vector<FourierMode> modes(3);
      for (FourierMode& f : modes) {
        for (int a = 0; a < 2 * n; ++a) f.wave[a] = rng.integer(-3, 3);
        f.amplitude = rng.uniform(-1, 1);
        f.phase = rng.uniform(0, 2 * pi);
      }
      const PotentialField phi = PotentialField::from_modes(g, modes);
      const HermitianField h = complex_hessian(phi);
      for (std::size_t p = 0; p < g.size(); p += 7) {
        const HermitianMatrix ref = analytic(g, modes, p);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) CHECK(std::abs(h[p](i, j) - ref(i, j)) <= 1e-10);
      }
    }
  }

  TEST_CASE("mixed example sin(2 pi x1) sin(2 pi y2)") {
    const TorusGrid g(2, 8);
    // sin a sin b = (cos(a - b) - cos(a + b)) / 2
    std::vector<FourierMode> modes(2);
    modes[0].wave = {1, 0, 0, -1};
    modes[0].amplitude = 0.5;
    modes[1].wave = {1, 0, 0, 1};
    modes[1].amplitude = -0.5;
    const HermitianField h = complex_hessian(PotentialField::from_modes(g, modes));
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double x1 = g.coordinate(p, 0), y2 = g.coordinate(p, 3);
      // phi_{x1 y2} = 4 pi^2 cos cos, so phi_{1 2bar} = i pi^2 cos(2 pi x1) cos(2 pi y2)
      const cplx expect(0.0, pi * pi * std::cos(2 * pi * x1) * std::cos(2 * pi * y2));
      CHECK(std::abs(h[p](0, 1) - expect) <= 1e-10);
      const double diag = -pi * pi * std::sin(2 * pi * x1) * std::sin(2 * pi * y2);
      CHECK(std::abs(h[p](0, 0) - diag) <= 1e-10);
      CHECK(std::abs(h[p](1, 1) - diag) <= 1e-10);
    }
  }

  TEST_CASE("inactive axes") {
    const TorusGrid g(2, 16, 0b0101u);
    std::vector<FourierMode> modes(1);
    modes[0].wave = {2, 0, 1, 0};
    modes[0].amplitude = 0.3;
    const PotentialField phi = PotentialField::from_modes(g, modes);
    const HermitianField h = complex_hessian(phi);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const HermitianMatrix ref = analytic(g, modes, p);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(h[p](i, j) - ref(i, j)) <= 1e-10);
    }
  }

  TEST_CASE("trace of ddbar integrates to zero and the Nyquist mode is dropped") {
    const TorusGrid g(1, 8);
    PotentialField alt(g);
    for (std::size_t p = 0; p < g.size(); ++p) alt[p] = (g.axis_index(p, 0) % 2) ? 1.0 : -1.0;
    const HermitianField h = complex_hessian(alt);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(std::abs(h[p](0, 0)) <= 1e-12);
  }

  TEST_CASE("high-mode fraction") {
    const TorusGrid g(1, 16);
    SpectralHessian s(g);
    std::vector<FourierMode> low(1), high(1);
    low[0].wave = {1, 0};
    low[0].amplitude = 1;
    high[0].wave = {7, 0};
    high[0].amplitude = 1;
    CHECK(s.high_mode_fraction(PotentialField::from_modes(g, low).values()) <= 1e-20);
    CHECK(s.high_mode_fraction(PotentialField::from_modes(g, high).values()) ==
          doctest::Approx(1.0));
    CHECK(s.high_mode_fraction(PotentialField(g, 2.0).values()) == 0.0);
  }
}
