#include "sigmaflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/parallel.hpp"

namespace sigmaflow {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralHessian::Impl {
  TorusGrid grid;
  int rank = 0;                       // number of active axes
  std::array<int, kMaxAxes> axis_of{};  // active dimension d -> torus axis
  std::size_t real_size = 0;
  std::size_t spec_size = 0;
  std::array<std::size_t, kMaxAxes> spec_stride{};
  std::array<int, kMaxAxes> spec_extent{};

  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_complex* work_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  // Signed first-derivative wavenumber per torus axis, per spectral index.
  // Nyquist and inactive axes are zero.
  std::vector<std::array<double, kMaxAxes>> wave;

  explicit Impl(const TorusGrid& g) : grid(g) {
    for (int a = 0; a < g.axes(); ++a)
      if (g.active(a)) axis_of[rank++] = a;
    real_size = g.size();
    if (rank == 0) return;

    const int N = g.points();
    spec_size = 1;
    for (int d = rank - 1; d >= 0; --d) {
      spec_extent[d] = d == rank - 1 ? N / 2 + 1 : N;
      spec_stride[d] = spec_size;
      spec_size *= static_cast<std::size_t>(spec_extent[d]);
    }

    wave.resize(spec_size);
    for (std::size_t s = 0; s < spec_size; ++s) {
      std::array<double, kMaxAxes> w{};
      for (int d = 0; d < rank; ++d) {
        const int m = static_cast<int>((s / spec_stride[d]) % spec_extent[d]);
        int kappa = m <= N / 2 ? m : m - N;
        if (2 * std::abs(kappa) == N) kappa = 0;
        w[axis_of[d]] = kappa;
      }
      wave[s] = w;
    }

    real_buf = fftw_alloc_real(real_size);
    spec_buf = fftw_alloc_complex(spec_size);
    work_buf = fftw_alloc_complex(spec_size);
    std::array<int, kMaxAxes> dims{};
    std::fill(dims.begin(), dims.begin() + rank, N);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c(rank, dims.data(), real_buf, spec_buf, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r(rank, dims.data(), work_buf, real_buf, FFTW_ESTIMATE);
    if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(spec_buf);
    fftw_free(work_buf);
  }

  void transform(std::span<const double> phi) const {
    std::memcpy(real_buf, phi.data(), real_size * sizeof(double));
    fftw_execute_dft_r2c(forward, real_buf, spec_buf);
  }

  // Applies a real even symbol to the stored spectrum and inverts into out.
  template <class Symbol>
  void invert(Symbol symbol, std::vector<double>& out) const {
    const double scale = 1.0 / static_cast<double>(real_size);
    for (std::size_t s = 0; s < spec_size; ++s) {
      const double f = symbol(wave[s]) * scale;
      work_buf[s][0] = spec_buf[s][0] * f;
      work_buf[s][1] = spec_buf[s][1] * f;
    }
    // c2r destroys its input; work_buf is rebuilt on every call.
    fftw_execute_dft_c2r(backward, work_buf, real_buf);
    out.assign(real_buf, real_buf + real_size);
  }
};

SpectralHessian::SpectralHessian(const TorusGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralHessian::~SpectralHessian() = default;

const TorusGrid& SpectralHessian::grid() const noexcept { return impl_->grid; }

void SpectralHessian::components(std::span<const double> phi,
                                 std::vector<std::vector<double>>& comp) const {
  const Impl& im = *impl_;
  const TorusGrid& g = im.grid;
  const int n = g.n();
  if (phi.size() != g.size()) throw ArgumentError("SpectralHessian: field size differs from grid");
  comp.resize(static_cast<std::size_t>(n * n));
  for (auto& c : comp) c.assign(g.size(), 0.0);
  if (im.rank == 0) return;

  im.transform(phi);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  auto direction_active = [&](int i) { return g.active(2 * i) || g.active(2 * i + 1); };

  for (int i = 0; i < n; ++i) {
    if (!direction_active(i)) continue;
    const int xi = 2 * i, yi = 2 * i + 1;
    im.invert([&](const auto& w) { return -pi2 * (w[xi] * w[xi] + w[yi] * w[yi]); },
              comp[i * n + i]);
    for (int j = i + 1; j < n; ++j) {
      if (!direction_active(j)) continue;
      const int xj = 2 * j, yj = 2 * j + 1;
      im.invert([&](const auto& w) { return -pi2 * (w[xi] * w[xj] + w[yi] * w[yj]); },
                comp[i * n + j]);
      im.invert([&](const auto& w) { return -pi2 * (w[xi] * w[yj] - w[yi] * w[xj]); },
                comp[j * n + i]);
    }
  }
}

void SpectralHessian::apply(std::span<const double> phi, std::vector<HermitianMatrix>& out) const {
  const int n = impl_->grid.n();
  std::vector<std::vector<double>> comp;
  components(phi, comp);
  out.assign(impl_->grid.size(), HermitianMatrix(n));
  for (std::size_t p = 0; p < out.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      out[p].set(i, i, comp[i * n + i][p]);
      for (int j = i + 1; j < n; ++j) out[p].set(i, j, cplx(comp[i * n + j][p], comp[j * n + i][p]));
    }
  }
}

HermitianField SpectralHessian::apply(const PotentialField& phi) const {
  if (!(phi.grid() == impl_->grid)) throw ArgumentError("SpectralHessian: grid mismatch");
  HermitianField field(impl_->grid, HermitianMatrix(impl_->grid.n()));
  std::vector<HermitianMatrix> values;
  apply(phi.values(), values);
  for (std::size_t p = 0; p < values.size(); ++p) field[p] = values[p];
  return field;
}

double SpectralHessian::high_mode_fraction(std::span<const double> phi) const {
  const Impl& im = *impl_;
  if (im.rank == 0) return 0.0;
  im.transform(phi);
  const int N = im.grid.points();
  NeumaierSum total, high;
  for (std::size_t s = 1; s < im.spec_size; ++s) {
    // Modes on the half axis other than 0 and Nyquist stand for two conjugates.
    const int m_last = static_cast<int>(s % im.spec_extent[im.rank - 1]);
    const double weight = (m_last == 0 || 2 * m_last == N) ? 1.0 : 2.0;
    const double e = weight * (im.spec_buf[s][0] * im.spec_buf[s][0] +
                               im.spec_buf[s][1] * im.spec_buf[s][1]);
    total.add(e);
    bool is_high = false;
    for (int d = 0; d < im.rank; ++d) {
      const int m = static_cast<int>((s / im.spec_stride[d]) % im.spec_extent[d]);
      const int kappa = m <= N / 2 ? m : N - m;
      if (3 * kappa > N) is_high = true;
    }
    if (is_high) high.add(e);
  }
  return total.value() > 0.0 ? high.value() / total.value() : 0.0;
}

HermitianField complex_hessian(const PotentialField& phi) {
  return SpectralHessian(phi.grid()).apply(phi);
}

}  // namespace sigmaflow
