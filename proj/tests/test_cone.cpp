#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sigmaflow/cone.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/random.hpp"

using namespace sigmaflow;

namespace {

Background constant_bg(const HermitianMatrix& h, int k, std::vector<double> b = {}) {
  return Background{HermitianMatrix::identity(h.dim()), h, std::nullopt, k, std::move(b)};
}

HermitianField constant_field(const HermitianMatrix& h) {
  return HermitianField(TorusGrid(h.dim(), 8, 0u), h);
}

}  // namespace

TEST_SUITE("cone") {
  TEST_CASE("diag(2,1) margin") {
    const HermitianMatrix h = HermitianMatrix::diagonal({2.0, 1.0});
    const ConeReport r = cone_margin(constant_field(h), constant_bg(h, 1), 1, 1.5);
    CHECK(r.in_cone);
    CHECK(r.margin == doctest::Approx(0.5));
  }

  TEST_CASE("omega is always in the cone") {
    for (int n = 1; n <= 4; ++n) {
      const HermitianMatrix id = HermitianMatrix::identity(n);
      for (int k = 1; k < n; ++k) {
        const double c = binomial(n, k);
        const ConeReport r = cone_margin(constant_field(id), constant_bg(id, k), k, c);
        CHECK(r.in_cone);
        CHECK(r.margin == doctest::Approx(c - binomial(n - 1, k)));
      }
      const ConeReport top = cone_margin(constant_field(id), constant_bg(id, n), n, 1.0);
      CHECK(top.in_cone);
      CHECK(std::isinf(top.margin));
    }
  }

  TEST_CASE("out of the cone") {
    // c' = 1.5 but chi' = diag(10, 0.5) has sigma_1(chi'^{-1} | 0) = 2.
    const HermitianMatrix h = HermitianMatrix::diagonal({10.0, 0.5});
    const ConeReport r = cone_margin(constant_field(h), constant_bg(h, 1), 1, 1.5);
    CHECK_FALSE(r.in_cone);
    CHECK(r.margin == doctest::Approx(-0.5));
  }

  TEST_CASE("degenerate chi' is an error") {
    const HermitianMatrix h = HermitianMatrix::diagonal({1.0, -1.0});
    CHECK_THROWS_AS(cone_margin(constant_field(h), constant_bg(HermitianMatrix::identity(2), 1), 1,
                                2.0),
                    DegenerateMetric);
  }

  TEST_CASE("augmented margin") {
    const HermitianMatrix id = HermitianMatrix::identity(2);
    const ConeReport r = cone_margin_augmented(constant_field(id), constant_bg(id, 1, {1.0}), 1, 3.0);
    CHECK(r.in_cone);
    CHECK(r.margin == doctest::Approx(1.0));

    // Large b reduces to the plain margin; the margin shrinks as b decreases.
    const HermitianMatrix h = HermitianMatrix::diagonal({2.0, 1.0});
    const double plain = cone_margin(constant_field(h), constant_bg(h, 1), 1, 1.5).margin;
    const double big = cone_margin_augmented(constant_field(h), constant_bg(h, 1, {1e12}), 1, 1.5)
                           .margin;
    CHECK(big == doctest::Approx(plain).epsilon(1e-10));
    double last = big;
    for (double b : {10.0, 3.0, 1.0, 0.3}) {
      const double m = cone_margin_augmented(constant_field(h), constant_bg(h, 1, {b}), 1, 1.5).margin;
      CHECK(m < last);
      last = m;
    }
  }

  TEST_CASE("theorem constants example") {
    const HermitianMatrix id = HermitianMatrix::identity(2);
    const TheoremConstants tc = theorem_constants(constant_field(id), constant_bg(id, 1), 1, 1.0,
                                                  2.0, 0.1);
    CHECK(tc.lambda == doctest::Approx(1));
    CHECK(tc.c_prime == doctest::Approx(2));
    CHECK(tc.eta == doctest::Approx(1));
    CHECK(tc.delta == doctest::Approx(2));
    CHECK(tc.epsilon == doctest::Approx(1.0 / 11));
    CHECK(tc.N == doctest::Approx(0.5 / (1 - std::sqrt(1.1) * 0.5)));
    CHECK(tc.N == doctest::Approx(1.0512).epsilon(1e-4));
    CHECK(tc.N_sufficient > tc.N);

    CHECK_THROWS_AS(theorem_constants(constant_field(id), constant_bg(id, 1), 1, 1.0, 2.0, 10.0),
                    ArgumentError);
    CHECK_THROWS_AS(theorem_constants(constant_field(id), constant_bg(id, 1), 1, 2.0, 1.0, 0.1),
                    ArgumentError);
  }

  TEST_CASE("the (1+theta)^{1/2} N admits a negative gap; the sufficient N does not") {
    // chi' = omega, c' = 2, eps = 1/11: the gap is
    // (10/11)(1/a^2 + 1/b^2) - (1/a + 1/b)^2 / 2, negative for a/b near 1.
    const HermitianMatrix id = HermitianMatrix::identity(2);
    const TheoremConstants tc = theorem_constants(constant_field(id), constant_bg(id, 1), 1, 1.0,
                                                  2.0, 0.1);
    const double b = 1.5, a = 1.06 * b;
    CHECK(a / b >= tc.N);
    CHECK(1 / a + 1 / b >= 1.0);
    CHECK(1 / a + 1 / b <= 2.0);
    CHECK(theorem_gap(EigenList{a, b}, id, 1, tc.epsilon, tc.c_prime) < 0);

    Rng rng(31, 0, 0);
    for (int trial = 0; trial < 2000; ++trial) {
      const double r = rng.log_uniform(tc.N_sufficient, 100 * tc.N_sufficient);
      const double s = rng.uniform(1.0, 2.0);  // sigma_1(chi^{-1})
      const double lo = (1 + 1 / r) / s;
      const EigenList chi{r * lo, lo};
      CHECK(theorem_gap(chi, id, 1, tc.epsilon, tc.c_prime) >= -1e-12);
    }
  }

  TEST_CASE("theorem gap examples") {
    for (int n = 1; n <= 4; ++n) {
      RealTuple ones(n);
      for (int i = 0; i < n; ++i) ones[i] = 1.0;
      const EigenList chi(ones.span());
      CHECK(theorem_gap(chi, HermitianMatrix::identity(n), 1, 0.0, n) ==
            doctest::Approx(0).scale(1.0));
      CHECK(theorem_gap(chi, HermitianMatrix::identity(n), 1, 1.0, n) ==
            doctest::Approx(-static_cast<double>(n)));
    }
  }

  TEST_CASE("theorem constants under rescaling") {
    // chi' -> t chi' with the class scaled too: c' -> c'/t, lambda -> t lambda, eta -> eta/t.
    const HermitianMatrix h = HermitianMatrix::diagonal({2.0, 1.5, 1.0});
    const TheoremConstants a = theorem_constants(constant_field(h), constant_bg(h, 2), 2, 1.0,
                                                 2.0, 0.05);
    const TheoremConstants b = theorem_constants(constant_field(3.0 * h), constant_bg(3.0 * h, 2),
                                                 2, 1.0, 2.0, 0.05);
    CHECK(b.lambda == doctest::Approx(3 * a.lambda));
    CHECK(b.c_prime == doctest::Approx(a.c_prime / 9));
    CHECK(b.eta == doctest::Approx(a.eta / 9));
  }
}
