#pragma once

// Fourier differentiation on the periodic grid (FFTW r2c / c2r over the
// active axes).

#include <memory>
#include <span>
#include <vector>

#include "sigmaflow/geometry.hpp"

namespace sigmaflow {

class SpectralHessian {
 public:
  explicit SpectralHessian(const TorusGrid& grid);
  ~SpectralHessian();
  SpectralHessian(const SpectralHessian&) = delete;
  SpectralHessian& operator=(const SpectralHessian&) = delete;

  const TorusGrid& grid() const noexcept;

  /// Real component fields of the Hessian, n*n arrays: comp[i*n+j] holds
  /// Re phi_{i jbar} for i <= j and Im phi_{j ibar} for i > j. Directions with
  /// both axes inactive are left zero.
  void components(std::span<const double> phi, std::vector<std::vector<double>>& comp) const;

  /// phi_{i jbar} = (1/4)(phi_{x_i x_j} + phi_{y_i y_j}) + (i/4)(phi_{x_i y_j} - phi_{y_i x_j}).
  /// Writes into out (resized to the grid). Not safe to call concurrently on
  /// one object: the FFT buffers are shared.
  void apply(std::span<const double> phi, std::vector<HermitianMatrix>& out) const;
  HermitianField apply(const PotentialField& phi) const;

  /// Fraction of non-mean spectral energy carried by modes with some
  /// |wavenumber| > points/3.
  double high_mode_fraction(std::span<const double> phi) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience; plans on every call.
HermitianField complex_hessian(const PotentialField& phi);

}  // namespace sigmaflow
