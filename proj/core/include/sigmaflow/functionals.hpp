#pragma once

// Energy functionals along paths of potentials. All form integrals use
// int omega^n = n! Vol, with Vol = det G.

#include <memory>
#include <span>
#include <vector>

#include "sigmaflow/geometry.hpp"
#include "sigmaflow/spectral.hpp"

namespace sigmaflow {

struct FunctionalValue {
  int j = 0;
  double value = 0.0;
  /// decomposition[l] = int phi chi_phi^l ^ chi0^{j-l} ^ omega^{n-j}
  std::vector<double> decomposition;
};

/// Caches chi0, the class constants and an FFT plan for one background and grid.
class Energy {
 public:
  Energy(const Background& bg, const TorusGrid& grid);

  const Background& background() const noexcept { return bg_; }
  const TorusGrid& grid() const noexcept { return grid_; }
  const HermitianField& chi0() const noexcept { return chi0_; }
  const ClassConstants& constants() const noexcept { return constants_; }
  const MetricFrame& frame() const noexcept { return frame_; }

  /// chi_phi; throws DegenerateMetric.
  HermitianField chi(const PotentialField& phi) const;

  /// int weight * chi^a ^ chi0^b ^ omega^{n-a-b}; empty weight means 1.
  double wedge_integral(std::span<const double> weight, const HermitianField& chi, int a,
                        int b) const;

  FunctionalValue F(const PotentialField& phi, const HermitianField& chi, int j) const;
  FunctionalValue F(const PotentialField& phi, int j) const;

  /// F_j - c_{n-j} F_n
  double F_tilde(const PotentialField& phi, const HermitianField& chi, int j) const;

  /// F~_{n-k,n} + alpha F~_{n-k+1,n}
  double F_tilde_alpha(const PotentialField& phi, const HermitianField& chi, int k,
                       double alpha) const;

  /// (1/(n-k+1)) sum_l int chi^l ^ chi0^{n-k-l} ^ omega^k
  double mu_mass(const HermitianField& chi, int k) const;

  /// int delta chi^j ^ omega^{n-j}
  double first_variation(const HermitianField& chi, std::span<const double> delta, int j) const;

  /// F_j by 16-point Gauss-Legendre along s -> s^2 phi (path-independence check).
  double F_quadrature(const PotentialField& phi, int j) const;

 private:
  Background bg_;
  TorusGrid grid_;
  MetricFrame frame_;
  std::shared_ptr<SpectralHessian> hessian_;
  HermitianField chi0_;
  ClassConstants constants_;
};

FunctionalValue F_j(const PotentialField& phi, int j, const Background& bg);
double F_tilde(const PotentialField& phi, int j, const Background& bg);
double F_tilde_alpha(const PotentialField& phi, int k, double alpha, const Background& bg);
double mu_mass(const PotentialField& phi, int k, const Background& bg);

/// phi - F_{n-k}(phi) / mass, so that F_{n-k} of the result vanishes.
PotentialField normalize(const PotentialField& phi, int k, const Background& bg);

/// |(F_j(phi + h d) - F_j(phi - h d)) / 2h - int d chi_phi^j ^ omega^{n-j}|
double variation_gap(const PotentialField& phi, const PotentialField& delta, int j,
                     const Background& bg, double h);

/// int d (chi^{n-k} ^ omega^k - c_k chi^n): first variation of F~_{n-k,n}.
double euler_lagrange_variation(const PotentialField& phi, const PotentialField& delta, int k,
                                const Background& bg);

struct HolderGap {
  double lhs = 0.0;  ///< int (sigma_{n-k}/sigma_n)^{1/k} chi^{n-k} ^ omega^k
  double rhs = 0.0;  ///< c'^{1/k} int chi^{n-k} ^ omega^k
};

/// Both sides of the Hoelder estimate for a positive metric field with the
/// given class constant.
HolderGap holder_gap(const HermitianField& chi, const HermitianMatrix& G, int k, double c_prime);

}  // namespace sigmaflow
