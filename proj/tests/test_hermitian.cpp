#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/random.hpp"
#include "sigmaflow/symfun.hpp"

using namespace sigmaflow;

namespace {

HermitianMatrix real_matrix(int n, std::initializer_list<double> rows) {
  std::vector<cplx> e(rows.begin(), rows.end());
  return HermitianMatrix(n, e);
}

// Polarization: D(A_1..A_n) = (1/n!) sum_S (-1)^{n-|S|} det(sum_{i in S} A_i).
double polarized(const std::vector<HermitianMatrix>& a) {
  const int n = static_cast<int>(a.size());
  double total = 0.0, fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s += oracle::to_eigen(a[i]);
    const double sign = ((n - __builtin_popcount(mask)) % 2) ? -1.0 : 1.0;
    total += sign * s.determinant().real();
  }
  return total / fact;
}

}  // namespace

TEST_SUITE("hermitian") {
  TEST_CASE("construction enforces conjugate symmetry") {
    const std::vector<cplx> bad = {1.0, cplx(0, 1), cplx(0, 1), 2.0};
    CHECK_THROWS_AS(HermitianMatrix(2, bad), ArgumentError);
    const std::vector<cplx> good = {1.0, cplx(0, 1), cplx(0, -1), 2.0};
    const HermitianMatrix h(2, good);
    CHECK(h(1, 0) == cplx(0, -1));
    HermitianMatrix s(3);
    s.set(0, 2, cplx(1, 2));
    CHECK(s(2, 0) == cplx(1, -2));
  }

  TEST_CASE("eigvals examples") {
    const RealTuple id = eigvals(HermitianMatrix::identity(3));
    for (double v : id) CHECK(v == doctest::Approx(1));
    const RealTuple a = eigvals(real_matrix(2, {2, 1, 1, 2}));
    CHECK(a[0] == doctest::Approx(3));
    CHECK(a[1] == doctest::Approx(1));
    const RealTuple d = eigvals(HermitianMatrix::diagonal({5.0, -1.0}));
    CHECK(d[0] == 5);
    CHECK(d[1] == -1);
  }

  TEST_CASE("eigvals and det agree with the Eigen solver") {
    Rng rng(11, 0, 0);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = rng.integer(1, 4);
      const HermitianMatrix a = trial % 2 ? random_positive_hermitian(rng, n)
                                          : random_unit_hermitian(rng, n);
      const RealTuple mine = eigvals(a);
      const std::vector<double> ref = oracle::eigvals(a);
      const double scale = std::max(1.0, std::abs(ref[0]));
      for (int i = 0; i < n; ++i) CHECK(std::abs(mine[i] - ref[i]) <= 1e-12 * scale);
      const double dref = oracle::to_eigen(a).determinant().real();
      CHECK(det(a) == doctest::Approx(dref).epsilon(1e-10).scale(std::pow(scale, n)));
    }
  }

  TEST_CASE("eigen_decomposition reconstructs the matrix") {
    Rng rng(12, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = rng.integer(1, 4);
      const HermitianMatrix a = random_unit_hermitian(rng, n);
      const EigenDecomposition e = eigen_decomposition(a);
      ComplexMatrix d(n);
      for (int i = 0; i < n; ++i) d(i, i) = e.values[i];
      const ComplexMatrix back = e.vectors * d * e.vectors.adjoint();
      const ComplexMatrix vv = e.vectors.adjoint() * e.vectors;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(back(i, j) - a(i, j)) <= 1e-12);
          CHECK(std::abs(vv(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
      for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
  }

  TEST_CASE("eigenvalues relative to a metric") {
    const RealTuple same = eigvals_metric(2.0 * HermitianMatrix::diagonal({3.0, 1.0}),
                                          HermitianMatrix::diagonal({3.0, 1.0}));
    CHECK(same[0] == doctest::Approx(2));
    CHECK(same[1] == doctest::Approx(2));
    const RealTuple one = eigvals_metric(HermitianMatrix::diagonal({2.0, 1.0}),
                                         HermitianMatrix::diagonal({2.0, 1.0}));
    CHECK(one[0] == doctest::Approx(1));
    CHECK(one[1] == doctest::Approx(1));
    CHECK_THROWS_AS(MetricFrame(HermitianMatrix::diagonal({1.0, -1.0})), DomainError);

    // Generalized problem through Eigen: G^{-1/2} A G^{-1/2}.
    Rng rng(13, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = rng.integer(1, 4);
      const HermitianMatrix a = random_unit_hermitian(rng, n);
      const HermitianMatrix g = random_positive_hermitian(rng, n, 0.5, 2.0);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::to_eigen(a),
                                                                    oracle::to_eigen(g));
      const RealTuple mine = eigvals_metric(a, g);
      for (int i = 0; i < n; ++i) {
        CHECK(mine[i] == doctest::Approx(es.eigenvalues()[n - 1 - i]).epsilon(1e-10).scale(1.0));
      }
      const EigenDecomposition p = MetricFrame(g).pencil(a);
      const HermitianMatrix wgw = congruence(g, p.vectors);
      const HermitianMatrix waw = congruence(a, p.vectors);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(wgw(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);
          CHECK(std::abs(waw(i, j) - (i == j ? p.values[i] : 0.0)) <= 1e-10);
        }
    }
  }

  TEST_CASE("principal minor sums are the eigenvalue sigmas") {
    Rng rng(14, 0, 0);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = rng.integer(1, 4);
      const HermitianMatrix a = random_unit_hermitian(rng, n);
      const SigmaList s = principal_minor_sums(a);
      const std::vector<double> ev = oracle::eigvals(a);
      for (int k = 0; k <= n; ++k) {
        CHECK(s[k] == doctest::Approx(oracle::sigma_subsets(k, ev)).epsilon(1e-10).scale(1.0));
      }
    }
  }

  TEST_CASE("minor_dets and Fischer") {
    const int i0[] = {0};
    const MinorDets m = minor_dets(real_matrix(2, {2, 1, 1, 2}), i0);
    CHECK(m.det_a == doctest::Approx(3));
    CHECK(m.det_i == doctest::Approx(2));
    CHECK(m.det_complement == doctest::Approx(2));
    const int i01[] = {0, 1};
    CHECK_THROWS_AS(minor_dets(real_matrix(2, {2, 1, 1, 2}), i01), ArgumentError);
    const MinorDets d = minor_dets(HermitianMatrix::diagonal({2.0, 3.0, 5.0}), i0);
    CHECK(d.det_a == doctest::Approx(d.det_i * d.det_complement));
  }

  TEST_CASE("diag_sigma_gap") {
    CHECK(diag_sigma_gap(real_matrix(2, {2, 1, 1, 2}), 1) == doctest::Approx(1.0 / 3));
    CHECK(diag_sigma_gap(HermitianMatrix::diagonal({2.0, 3.0, 4.0}), 2) ==
          doctest::Approx(0).epsilon(1e-15));
    Rng rng(15, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = rng.integer(2, 4);
      const HermitianMatrix a = random_positive_hermitian(rng, n);
      double prod = 1.0;
      for (int i = 0; i < n; ++i) prod *= a.diag(i);
      const double had = 1.0 / det(a) - 1.0 / prod;
      CHECK(diag_sigma_gap(a, n) == doctest::Approx(had).epsilon(1e-9).scale(1.0 / det(a)));
      CHECK(had >= -1e-12 / det(a));
    }
  }

  TEST_CASE("mixed discriminant matches polarization") {
    CHECK(wedge_ratio(HermitianMatrix::diagonal({2.0, 3.0}), 1, HermitianMatrix::identity(2)) ==
          doctest::Approx(2.5));
    CHECK(wedge_ratio(HermitianMatrix::diagonal({1.0, 1.0, -1.0}), 2,
                      HermitianMatrix::identity(3)) == doctest::Approx(-1.0 / 3));
    const HermitianMatrix a = real_matrix(2, {2, 1, 1, 2});
    CHECK(mixed_discriminant({{a, 2}}) == doctest::Approx(3));

    Rng rng(16, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = rng.integer(1, 4);
      std::vector<HermitianMatrix> ms;
      std::vector<WedgeFactor> f;
      for (int i = 0; i < n; ++i) {
        ms.push_back(random_unit_hermitian(rng, n));
        f.push_back({ms.back(), 1});
      }
      CHECK(mixed_discriminant(f) == doctest::Approx(polarized(ms)).epsilon(1e-10).scale(1.0));

      // D(A^j, I^{n-j}) = sigma_j(A)/C(n,j)
      const HermitianMatrix a2 = random_unit_hermitian(rng, n);
      const std::vector<double> ev = oracle::eigvals(a2);
      for (int j = 0; j <= n; ++j) {
        CHECK(wedge_ratio(a2, j, HermitianMatrix::identity(n)) ==
              doctest::Approx(oracle::sigma_subsets(j, ev) / binomial(n, j)).scale(1.0));
      }
    }
    CHECK_THROWS_AS(mixed_discriminant({{a, 1}}), ArgumentError);
  }

  TEST_CASE("wedge ratio relative to a metric") {
    Rng rng(17, 0, 0);
    const int n = 3;
    const HermitianMatrix g = random_positive_hermitian(rng, n, 0.5, 2.0);
    const HermitianMatrix a = random_unit_hermitian(rng, n);
    const std::vector<WedgeFactor> f = {{a, 1}, {g, 2}};
    // (a ^ G^{n-1}) / G^n = tr(G^{-1} a) / n
    const RealTuple ev = eigvals_metric(a, g);
    double tr = 0.0;
    for (double v : ev) tr += v;
    CHECK(wedge_ratio(f, MetricFrame(g)) == doctest::Approx(tr / n));
  }
}
