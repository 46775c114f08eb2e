#include "sigmaflow/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/parallel.hpp"
#include "sigmaflow/spectral.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

TorusGrid::TorusGrid(int n, int points) : TorusGrid(n, points, (1u << (2 * n)) - 1u) {}

TorusGrid::TorusGrid(int n, int points, unsigned active_mask)
    : n_(n), points_(points), mask_(active_mask) {
  if (n < 1 || n > kMaxDim) throw ArgumentError("torus dimension must lie in [1, 4]");
  if (points < 8 || !power_of_two(points)) {
    throw ArgumentError("grid points per axis must be a power of two >= 8, got " +
                        std::to_string(points));
  }
  if (active_mask >> (2 * n) != 0u) throw ArgumentError("active mask names axes beyond 2n");
  size_ = 1;
  for (int a = 2 * n - 1; a >= 0; --a) {
    stride_[a] = size_;
    size_ *= static_cast<std::size_t>(extent(a));
  }
}

int TorusGrid::active_count() const noexcept {
  int c = 0;
  for (int a = 0; a < axes(); ++a) c += active(a) ? 1 : 0;
  return c;
}

int TorusGrid::axis_index(std::size_t point, int axis) const noexcept {
  return static_cast<int>((point / stride_[axis]) % static_cast<std::size_t>(extent(axis)));
}

double TorusGrid::coordinate(std::size_t point, int axis) const noexcept {
  return static_cast<double>(axis_index(point, axis)) / points_;
}

TorusGrid TorusGrid::lifted(int p) const {
  if (p < 0 || n_ + p > kMaxDim) throw ArgumentError("lifted torus exceeds dimension 4");
  return TorusGrid(n_ + p, points_, mask_);
}

std::string TorusGrid::active_string() const {
  std::string s;
  for (int a = 0; a < axes(); ++a) s.push_back(active(a) ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------

PotentialField::PotentialField(const TorusGrid& grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

PotentialField::PotentialField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ArgumentError("field has " + std::to_string(values_.size()) + " samples, grid needs " +
                        std::to_string(grid_.size()));
  }
}

PotentialField PotentialField::from_modes(const TorusGrid& grid,
                                          std::span<const FourierMode> modes) {
  for (const FourierMode& m : modes) {
    for (int a = 0; a < kMaxAxes; ++a) {
      if (m.wave[a] == 0) continue;
      if (a >= grid.axes() || !grid.active(a)) {
        throw ArgumentError("Fourier mode varies along inactive axis " + std::to_string(a));
      }
      if (2 * std::abs(m.wave[a]) >= grid.points()) {
        throw ArgumentError("Fourier mode wavenumber " + std::to_string(m.wave[a]) +
                            " is not below the grid Nyquist limit");
      }
    }
  }
  PotentialField f(grid);
  const double two_pi = 2.0 * std::numbers::pi;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(grid.size()); ++p) {
    double v = 0.0;
    for (const FourierMode& m : modes) {
      // Integer phase accumulation keeps the argument exact modulo 1.
      long long num = 0;
      for (int a = 0; a < grid.axes(); ++a) {
        num += static_cast<long long>(m.wave[a]) * grid.axis_index(static_cast<std::size_t>(p), a);
      }
      num %= grid.points();
      v += m.amplitude * std::cos(two_pi * static_cast<double>(num) / grid.points() + m.phase);
    }
    f.values_[static_cast<std::size_t>(p)] = v;
  }
  return f;
}

PotentialField& PotentialField::axpy(double s, const PotentialField& other) {
  if (!(other.grid_ == grid_)) throw ArgumentError("axpy: grids differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

PotentialField PotentialField::lifted(int p) const {
  return PotentialField(grid_.lifted(p), values_);
}

PotentialField PotentialField::restricted(int n) const {
  if (n > grid_.n() || n < 1) throw ArgumentError("restricted: bad dimension");
  for (int a = 2 * n; a < grid_.axes(); ++a) {
    if (grid_.active(a)) throw ArgumentError("restricted: dropped axis is active");
  }
  return PotentialField(TorusGrid(n, grid_.points(), grid_.active_mask()), values_);
}

void write_snapshot(std::ostream& out, const PotentialField& phi) {
  const TorusGrid& g = phi.grid();
  out << g.n() << ' ' << g.points() << ' ' << g.active_string() << '\n';
  for (double v : phi.values()) out << format_double(v) << '\n';
}

PotentialField read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ArgumentError("snapshot: missing header");
  std::istringstream hs(header);
  int n = 0, points = 0;
  std::string mask_text;
  if (!(hs >> n >> points >> mask_text)) throw ArgumentError("snapshot: malformed header");
  if (n < 1 || n > kMaxDim || static_cast<int>(mask_text.size()) != 2 * n) {
    throw ArgumentError("snapshot: active_axes must have 2n characters");
  }
  unsigned mask = 0;
  for (int a = 0; a < 2 * n; ++a) {
    if (mask_text[a] == '1') {
      mask |= 1u << a;
    } else if (mask_text[a] != '0') {
      throw ArgumentError("snapshot: active_axes must be a 0/1 string");
    }
  }
  TorusGrid grid(n, points, mask);
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw ArgumentError("snapshot: bad value on data line " + std::to_string(values.size() + 1));
    }
    values.push_back(v);
  }
  if (values.size() != grid.size()) {
    throw ArgumentError("snapshot: expected " + std::to_string(grid.size()) + " values, found " +
                        std::to_string(values.size()));
  }
  return PotentialField(grid, std::move(values));
}

// ---------------------------------------------------------------------------

HermitianField::HermitianField(const TorusGrid& grid, const HermitianMatrix& fill)
    : grid_(grid), values_(grid.size(), fill) {}

// ---------------------------------------------------------------------------

void validate(const Background& bg) {
  const int n = bg.G.dim();
  if (n < 1 || n > kMaxDim) throw ArgumentError("dimension n must lie in [1, 4]");
  if (bg.H.dim() != n) throw ArgumentError("H and G dimensions differ");
  if (bg.k < 1 || bg.k > n) {
    throw ArgumentError("k=" + std::to_string(bg.k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (n + static_cast<int>(bg.augment.size()) > kMaxDim) {
    throw ArgumentError("n plus the augmentation length exceeds 4");
  }
  for (double b : bg.augment) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("augmentation entries must be positive");
  }
  if (bg.psi0 && bg.psi0->grid().n() != n) throw ArgumentError("psi0 grid dimension differs from n");
  MetricFrame frame(bg.G);  // throws if G is not positive
}

Background lift_augmented(const Background& bg) {
  validate(bg);
  const int n = bg.n();
  const int p = static_cast<int>(bg.augment.size());
  Background out;
  out.G = HermitianMatrix(n + p);
  out.H = HermitianMatrix(n + p);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out.G.set(i, j, bg.G(i, j));
      out.H.set(i, j, bg.H(i, j));
    }
  for (int e = 0; e < p; ++e) {
    out.G.set(n + e, n + e, 1.0);
    out.H.set(n + e, n + e, bg.augment[e]);
  }
  if (bg.psi0) out.psi0 = bg.psi0->lifted(p);
  out.k = bg.k;
  return out;
}

EigenRange relative_eigen_range(const HermitianField& field, const MetricFrame& frame) {
  const std::size_t size = field.size();
  std::vector<double> lo(size), hi(size);
  configure_threads();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(size); ++p) {
    const RealTuple ev = frame.eigvals(field[static_cast<std::size_t>(p)]);
    hi[p] = ev[0];
    lo[p] = ev[ev.size() - 1];
  }
  EigenRange r{lo[0], hi[0], 0};
  for (std::size_t p = 1; p < size; ++p) {
    if (lo[p] < r.min) {
      r.min = lo[p];
      r.argmin = p;
    }
    r.max = std::max(r.max, hi[p]);
  }
  return r;
}

namespace {

void require_positive(const HermitianField& field, const MetricFrame& frame, const char* what) {
  const EigenRange r = relative_eigen_range(field, frame);
  if (!(r.min > kPositivityFloor)) {
    std::ostringstream msg;
    msg << what << " is degenerate: min relative eigenvalue " << r.min << " at grid point "
        << r.argmin;
    throw DegenerateMetric(msg.str(), r.argmin, r.min);
  }
}

}  // namespace

HermitianField chi0_field(const Background& bg, const TorusGrid& grid) {
  MetricFrame frame(bg.G);
  HermitianField out;
  if (bg.psi0) {
    if (!(bg.psi0->grid() == grid)) throw ArgumentError("psi0 grid differs from the requested grid");
    out = complex_hessian(*bg.psi0);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += bg.H;
  } else {
    out = HermitianField(grid, bg.H);
  }
  require_positive(out, frame, "chi0");
  return out;
}

HermitianField chi_field(const HermitianField& chi0, const PotentialField& phi,
                         const MetricFrame& frame) {
  if (!(chi0.grid() == phi.grid())) throw ArgumentError("chi_field: grids differ");
  HermitianField out = complex_hessian(phi);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] += chi0[p];
  require_positive(out, frame, "chi_phi");
  return out;
}

HermitianField chi_field(const Background& bg, const PotentialField& phi) {
  return chi_field(chi0_field(bg, phi.grid()), phi, MetricFrame(bg.G));
}

double integrate(std::span<const double> f, const HermitianMatrix& G) {
  if (f.empty()) return 0.0;
  return neumaier_sum(f) / static_cast<double>(f.size()) * det(G);
}

double integrate(const PotentialField& f, const HermitianMatrix& G) {
  return integrate(f.values(), G);
}

ClassConstants class_constants(const Background& bg) {
  validate(bg);
  const int n = bg.n();
  const TorusGrid grid = bg.psi0 ? bg.psi0->grid() : TorusGrid(n, 8, 0u);
  const HermitianField chi0 = chi0_field(bg, grid);
  const MetricFrame frame(bg.G);

  std::vector<std::vector<double>> s(n + 1, std::vector<double>(grid.size()));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(grid.size()); ++p) {
    const RealTuple ev = frame.eigvals(chi0[static_cast<std::size_t>(p)]);
    const Sigmas sig(ev.span());
    for (int j = 0; j <= n; ++j) s[j][p] = sig[j];
  }
  std::vector<double> integral(n + 1);
  for (int j = 0; j <= n; ++j) integral[j] = integrate(s[j], bg.G);

  ClassConstants out;
  out.c.resize(n + 1);
  out.c_prime.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    out.c_prime[k] = integral[n - k] / integral[n];
    out.c[k] = out.c_prime[k] / binomial(n, k);
  }
  return out;
}

double oscillation(const PotentialField& phi) {
  if (phi.size() == 0) return 0.0;
  const auto [lo, hi] = std::minmax_element(phi.values().begin(), phi.values().end());
  return *hi - *lo;
}

}  // namespace sigmaflow
