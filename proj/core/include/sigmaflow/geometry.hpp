#pragma once

// Flat torus C^n / (Z^n + i Z^n) with constant background forms. Fields are
// sampled on a uniform periodic grid; axis order is x1, y1, x2, y2, ...
// (z_j = x_j + i y_j). An axis may be inactive: fields are constant along
// it and it occupies a single stored sample.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigmaflow/hermitian.hpp"

namespace sigmaflow {

inline constexpr int kMaxAxes = 2 * kMaxDim;

class TorusGrid {
 public:
  TorusGrid() = default;
  /// All 2n axes active.
  TorusGrid(int n, int points);
  /// Bit a of active_mask marks axis a active.
  TorusGrid(int n, int points, unsigned active_mask);

  int n() const noexcept { return n_; }
  int points() const noexcept { return points_; }
  int axes() const noexcept { return 2 * n_; }
  bool active(int axis) const noexcept { return (mask_ >> axis) & 1u; }
  unsigned active_mask() const noexcept { return mask_; }
  int active_count() const noexcept;
  std::size_t size() const noexcept { return size_; }

  /// Stored extent along an axis (points or 1).
  int extent(int axis) const noexcept { return active(axis) ? points_ : 1; }
  /// Grid index along `axis` of the flat point index.
  int axis_index(std::size_t point, int axis) const noexcept;
  /// Coordinate in [0, 1) along `axis`.
  double coordinate(std::size_t point, int axis) const noexcept;

  /// Same grid as a torus of dimension n + p with the extra 2p axes inactive.
  TorusGrid lifted(int p) const;

  /// "1101"-style mask string in axis order.
  std::string active_string() const;

  bool operator==(const TorusGrid&) const = default;

 private:
  int n_ = 0;
  int points_ = 0;
  unsigned mask_ = 0;
  std::size_t size_ = 0;
  std::array<std::size_t, kMaxAxes> stride_{};
};

/// amplitude * cos(2 pi <wave, (x1, y1, ...)> + phase)
struct FourierMode {
  std::array<int, kMaxAxes> wave{};
  double amplitude = 0.0;
  double phase = 0.0;
};

class PotentialField {
 public:
  PotentialField() = default;
  explicit PotentialField(const TorusGrid& grid, double fill = 0.0);
  PotentialField(const TorusGrid& grid, std::vector<double> values);

  /// Sum of Fourier modes. A mode with nonzero wavenumber on an inactive axis
  /// is rejected.
  static PotentialField from_modes(const TorusGrid& grid, std::span<const FourierMode> modes);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// this += s * other (same grid).
  PotentialField& axpy(double s, const PotentialField& other);

  /// Same samples viewed on the lifted grid.
  PotentialField lifted(int p) const;
  /// Inverse of lifted(): drops inactive trailing dimensions.
  PotentialField restricted(int n) const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// Text snapshot: header "n N active_axes", then one value per line in
/// row-major order over the stored axes (last axis fastest).
void write_snapshot(std::ostream& out, const PotentialField& phi);
PotentialField read_snapshot(std::istream& in);

class HermitianField {
 public:
  HermitianField() = default;
  HermitianField(const TorusGrid& grid, const HermitianMatrix& fill);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  HermitianMatrix& operator[](std::size_t i) noexcept { return values_[i]; }
  const HermitianMatrix& operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  TorusGrid grid_;
  std::vector<HermitianMatrix> values_;
};

/// Background data: omega = G, chi0 = H + ddbar psi0, operator order k, and the
/// optional list b of fixed extra eigenvalues (augmented mode).
struct Background {
  HermitianMatrix G;
  HermitianMatrix H;
  std::optional<PotentialField> psi0;
  int k = 1;
  std::vector<double> augment;

  int n() const noexcept { return G.dim(); }
};

/// Checks dimensions, G > 0, k in [1, n], b > 0. Throws ArgumentError/DomainError.
void validate(const Background& bg);

/// Torus of dimension n + p, omega~ = diag(G, I_p), chi0~ = diag(H, b) + ddbar psi0.
/// The augmented flow on M is the plain flow on this torus.
Background lift_augmented(const Background& bg);

/// Positivity floor below which a metric field counts as degenerate.
inline constexpr double kPositivityFloor = 1e-10;

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t argmin = 0;
};

/// Range of eigenvalues relative to the frame's metric, over the whole field.
EigenRange relative_eigen_range(const HermitianField& field, const MetricFrame& frame);

/// chi0 sampled on the grid. Throws DegenerateMetric when not positive.
HermitianField chi0_field(const Background& bg, const TorusGrid& grid);

/// chi_phi = chi0 + ddbar phi. Throws DegenerateMetric naming the worst point.
HermitianField chi_field(const Background& bg, const PotentialField& phi);

/// Same, reusing a precomputed chi0 field.
HermitianField chi_field(const HermitianField& chi0, const PotentialField& phi,
                         const MetricFrame& frame);

/// Integral against dv = omega^n / n!: grid mean times det G.
double integrate(std::span<const double> f, const HermitianMatrix& G);
double integrate(const PotentialField& f, const HermitianMatrix& G);

struct ClassConstants {
  std::vector<double> c;        ///< c_k, k = 0..n
  std::vector<double> c_prime;  ///< c'_k = C(n, k) c_k
};

/// c'_k = int sigma_{n-k}(chi0) dv / int sigma_n(chi0) dv (eigenvalues relative
/// to omega). Uses psi0's grid if present, else one sample.
ClassConstants class_constants(const Background& bg);

double oscillation(const PotentialField& phi);

}  // namespace sigmaflow
