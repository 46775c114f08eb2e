#include "sigmaflow/flow.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/parallel.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow {

namespace {

constexpr double kMonotoneTol = 1e-8;
constexpr double kMassDriftTol = 1e-8;
constexpr double kChiFloorAlarm = 1e-6;
constexpr double kAliasingWarn = 1e-6;
constexpr int kGrowthAfter = 10;
constexpr double kGrowth = 1.2;
constexpr double kCapFactor = 4.0;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

Band band_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& RunLog::columns() {
  static const std::vector<std::string> cols = {
      "t",           "dt",          "residual_sup", "F_tilde",    "F_nk",
      "mu_mass",     "chi_min_eig", "chi_max_eig",  "osc_phi",    "phidot_min",
      "phidot_max",  "sigma_ratio_min", "sigma_ratio_max"};
  return cols;
}

void RunLog::write_csv(std::ostream& out) const {
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const RunRow& r : rows_) {
    const double v[] = {r.t,           r.dt,          r.residual_sup, r.F_tilde,    r.F_nk,
                        r.mu_mass,     r.chi_min_eig, r.chi_max_eig,  r.osc_phi,    r.phidot_min,
                        r.phidot_max,  r.sigma_ratio_min, r.sigma_ratio_max};
    for (std::size_t i = 0; i < std::size(v); ++i) out << (i ? "," : "") << fmt(v[i]);
    out << '\n';
  }
}

HermitianField restrict_field(const HermitianField& field, int n) {
  const TorusGrid& g = field.grid();
  for (int a = 2 * n; a < g.axes(); ++a) {
    if (g.active(a)) throw ArgumentError("restrict_field: dropped axis is active");
  }
  HermitianField out(TorusGrid(n, g.points(), g.active_mask()), HermitianMatrix(n));
  for (std::size_t p = 0; p < field.size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out[p].set(i, j, field[p](i, j));
  return out;
}

// ---------------------------------------------------------------------------

struct FlowSolver::Impl {
  Background original;
  Background work;
  TorusGrid grid;
  TorusGrid wgrid;
  FlowConfig cfg;
  MetricFrame frame;
  SpectralHessian hessian;
  std::vector<double> psi0;
  Energy energy;
  ClassConstants constants;
  int n = 0;
  int k = 1;
  double c = 0.0;
  double c_root = 0.0;

  mutable std::vector<std::vector<double>> comp;
  mutable std::vector<double> scratch;

  Impl(const Background& bg, const TorusGrid& g, const FlowConfig& config)
      : original(bg),
        work(bg.augment.empty() ? bg : lift_augmented(bg)),
        grid(g),
        wgrid(g.lifted(static_cast<int>(bg.augment.size()))),
        cfg(config),
        frame(work.G),
        hessian(wgrid),
        energy(work, wgrid),
        constants(class_constants(bg)) {
    n = work.n();
    k = work.k;
    psi0 = work.psi0 ? std::vector<double>(work.psi0->values().begin(), work.psi0->values().end())
                     : std::vector<double>(wgrid.size(), 0.0);
    c = energy.constants().c_prime[k];
    c_root = std::pow(c, 1.0 / k);
  }

  // Hessian components of psi0 + phi.
  void hessian_of(std::span<const double> phi) const {
    scratch.resize(phi.size());
    for (std::size_t p = 0; p < phi.size(); ++p) scratch[p] = psi0[p] + phi[p];
    hessian.components(scratch, comp);
  }

  HermitianMatrix chi_at(std::size_t p) const {
    HermitianMatrix m = work.H;
    for (int i = 0; i < n; ++i) {
      m.set(i, i, m.diag(i) + comp[i * n + i][p]);
      for (int j = i + 1; j < n; ++j) {
        m.set(i, j, m(i, j) + cplx(comp[i * n + j][p], comp[j * n + i][p]));
      }
    }
    return m;
  }

  void evaluate(std::span<const double> phi, std::vector<double>& phidot,
                std::vector<double>& ratio) const {
    hessian_of(phi);
    const std::size_t size = phi.size();
    phidot.resize(size);
    ratio.resize(size);
    std::vector<double> lower(size);
    configure_threads();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sp = 0; sp < static_cast<std::ptrdiff_t>(size); ++sp) {
      const std::size_t p = static_cast<std::size_t>(sp);
      const SigmaList s = principal_minor_sums(frame.reduce(chi_at(p)));
      // All sigma_j > 0 iff all eigenvalues > 0; sigma_n / sigma_{n-1} is a
      // lower bound for the smallest eigenvalue.
      bool positive = true;
      for (int j = 1; j <= n; ++j) positive = positive && s[j] > 0.0;
      lower[p] = positive ? s[n] / s[n - 1] : -1.0;
      const double q = s[n - k] / s[n];
      ratio[p] = q;
      phidot[p] = c_root - (k == 1 ? q : std::pow(q, 1.0 / k));
    }
    std::size_t worst = 0;
    for (std::size_t p = 1; p < size; ++p)
      if (lower[p] < lower[worst]) worst = p;
    if (!(lower[worst] > kPositivityFloor)) {
      throw DegenerateMetric("chi_phi degenerate at grid point " + std::to_string(worst), worst,
                             lower[worst]);
    }
  }
};

FlowSolver::FlowSolver(const Background& bg, const TorusGrid& grid, FlowConfig config) {
  validate(bg);
  if (grid.n() != bg.n()) throw ArgumentError("FlowSolver: grid dimension differs from n");
  if (bg.psi0 && !(bg.psi0->grid() == grid)) throw ArgumentError("FlowSolver: psi0 grid mismatch");
  if (!(config.t_max >= 0.0)) throw ArgumentError("t_max must be nonnegative");
  if (!(config.tol > 0.0)) throw ArgumentError("tol must be positive");
  if (config.log_every < 1) throw ArgumentError("log_every must be at least 1");
  if (!(config.dt0 >= 0.0)) throw ArgumentError("dt0 must be nonnegative");
  impl_ = std::make_unique<Impl>(bg, grid, config);
}

FlowSolver::~FlowSolver() = default;

const Background& FlowSolver::working_background() const noexcept { return impl_->work; }
const TorusGrid& FlowSolver::working_grid() const noexcept { return impl_->wgrid; }
bool FlowSolver::augmented() const noexcept { return !impl_->original.augment.empty(); }
double FlowSolver::c_operator() const noexcept { return impl_->c; }
const FlowConfig& FlowSolver::config() const noexcept { return impl_->cfg; }

FlowState FlowSolver::initial_state() const { return initial_state(PotentialField(impl_->wgrid)); }

FlowState FlowSolver::initial_state(const PotentialField& phi) const {
  FlowState s;
  if (phi.grid() == impl_->wgrid) {
    s.phi = phi;
  } else if (phi.grid() == impl_->grid) {
    s.phi = phi.lifted(static_cast<int>(impl_->original.augment.size()));
  } else {
    throw ArgumentError("initial_state: potential lives on a different grid");
  }
  impl_->evaluate(s.phi.values(), s.phidot, s.ratio);
  return s;
}

PotentialField FlowSolver::rhs(const FlowState& state) const {
  std::vector<double> phidot, ratio;
  impl_->evaluate(state.phi.values(), phidot, ratio);
  return PotentialField(impl_->wgrid, std::move(phidot));
}

double FlowSolver::residual(const FlowState& state) const {
  double r = 0.0;
  for (double q : state.ratio) r = std::max(r, std::abs(q - impl_->c));
  return r;
}

FlowState FlowSolver::step(const FlowState& state, double dt) const {
  if (!(dt > 0.0)) throw ArgumentError("step: dt must be positive");
  const Impl& im = *impl_;
  const std::size_t size = state.phi.size();
  const auto& y = state.phi.values();
  const std::vector<double>& k1 = state.phidot;
  std::vector<double> k2, k3, k4, ratio, stage(size);

  for (std::size_t p = 0; p < size; ++p) stage[p] = y[p] + 0.5 * dt * k1[p];
  im.evaluate(stage, k2, ratio);
  for (std::size_t p = 0; p < size; ++p) stage[p] = y[p] + 0.5 * dt * k2[p];
  im.evaluate(stage, k3, ratio);
  for (std::size_t p = 0; p < size; ++p) stage[p] = y[p] + dt * k3[p];
  im.evaluate(stage, k4, ratio);

  FlowState next;
  next.t = state.t + dt;
  std::vector<double> phi(size);
  for (std::size_t p = 0; p < size; ++p) {
    phi[p] = y[p] + dt / 6.0 * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
  }
  next.phi = PotentialField(im.wgrid, std::move(phi));
  im.evaluate(next.phi.values(), next.phidot, next.ratio);
  return next;
}

HermitianField FlowSolver::chi(const FlowState& state) const {
  const Impl& im = *impl_;
  im.hessian_of(state.phi.values());
  HermitianField out(im.wgrid, HermitianMatrix(im.n));
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = im.chi_at(p);
  return out;
}

double FlowSolver::automatic_dt() const {
  const Impl& im = *impl_;
  const HermitianField chi0 = chi(initial_state());
  // The lifted chi is diag(chi_M, b) and the b directions carry no derivatives,
  // so only the gradient entries of M's eigenvalues enter the stiffness.
  const MetricFrame frame(im.original.G);
  const HermitianField chi_m = restrict_field(chi0, im.original.n());
  double lambda0 = 0.0;
  for (std::size_t p = 0; p < chi_m.size(); ++p) {
    RealTuple mu = frame.eigvals(chi_m[p]);
    for (double b : im.original.augment) mu.push_back(b);
    const EigenList ev(mu.span());
    const RealTuple grad = F_gradient(ev, im.k);
    // EigenList sorts, so drop the entries sitting at the b values.
    std::vector<bool> skip(grad.size(), false);
    for (double b : im.original.augment) {
      for (int i = 0; i < ev.size(); ++i) {
        if (!skip[i] && ev[i] == b) {
          skip[i] = true;
          break;
        }
      }
    }
    double s = 0.0;
    for (int i = 0; i < ev.size(); ++i)
      if (!skip[i]) s += grad[i];
    lambda0 = std::max(lambda0, s);
  }
  const double pn = std::numbers::pi * im.wgrid.points();
  lambda0 *= pn * pn;
  return 0.5 / lambda0;
}

RunResult FlowSolver::run() const {
  const Impl& im = *impl_;
  const FlowConfig& cfg = im.cfg;
  RunResult result;
  result.c_operator = im.c;
  result.constants = im.constants;

  if (!im.original.augment.empty()) {
    const auto& b = im.original.augment;
    const int p = static_cast<int>(b.size());
    const Sigmas sb(b);
    double closed = 0.0;
    for (int i = 0; i <= std::min(p, im.k); ++i) {
      closed += sb[p - i] / sb[p] * im.constants.c_prime[im.k - i];
    }
    result.c_closed_form = closed;
  }

  FlowState state = initial_state();
  const Band ratio0 = band_of(state.ratio);
  const Band phidot0 = band_of(state.phidot);
  const double dt0 = cfg.dt0 > 0.0 ? cfg.dt0 : automatic_dt();
  const double dt_cap = kCapFactor * dt0;
  const int nk = im.n - im.k;

  double mass0 = 0.0;
  std::optional<RunRow> previous;

  auto flag = [&](const std::string& name, double t, double amount) {
    if (cfg.strict) {
      throw InvariantViolation(name + " violated at t=" + fmt(t) + " by " + fmt(amount));
    }
    result.violations.push_back({name, t, amount});
  };

  auto log_row = [&](const FlowState& s, double dt) {
    const HermitianField chi = this->chi(s);
    const EigenRange eig = relative_eigen_range(chi, im.frame);
    RunRow row;
    row.t = s.t;
    row.dt = dt;
    row.residual_sup = residual(s);
    row.F_tilde = im.energy.F_tilde(s.phi, chi, nk);
    row.F_nk = im.energy.F(s.phi, chi, nk).value;
    row.mu_mass = im.energy.mu_mass(chi, im.k);
    row.chi_min_eig = eig.min;
    row.chi_max_eig = eig.max;
    row.osc_phi = oscillation(s.phi);
    const Band pd = band_of(s.phidot);
    const Band rt = band_of(s.ratio);
    row.phidot_min = pd.lo;
    row.phidot_max = pd.hi;
    row.sigma_ratio_min = rt.lo;
    row.sigma_ratio_max = rt.hi;

    if (!previous) {
      mass0 = row.mu_mass;
    } else {
      if (row.F_tilde > previous->F_tilde + kMonotoneTol) {
        flag("F_tilde_monotone", row.t, row.F_tilde - previous->F_tilde);
      }
      if (row.F_nk > previous->F_nk + kMonotoneTol) {
        flag("F_nk_monotone", row.t, row.F_nk - previous->F_nk);
      }
    }
    if (row.t > 0.0 && row.F_nk > kMonotoneTol) flag("F_nk_nonpositive", row.t, row.F_nk);
    const double drift = std::abs(row.mu_mass - mass0) / std::abs(mass0);
    if (drift > kMassDriftTol) flag("mu_mass_drift", row.t, drift);
    if (rt.lo < ratio0.lo - cfg.slack) flag("sigma_ratio_band", row.t, ratio0.lo - rt.lo);
    if (rt.hi > ratio0.hi + cfg.slack) flag("sigma_ratio_band", row.t, rt.hi - ratio0.hi);
    if (pd.lo < phidot0.lo - cfg.slack) flag("phidot_band", row.t, phidot0.lo - pd.lo);
    if (pd.hi > phidot0.hi + cfg.slack) flag("phidot_band", row.t, pd.hi - phidot0.hi);

    if (eig.min < kChiFloorAlarm) {
      result.warnings.push_back("chi min eigenvalue " + fmt(eig.min) + " at t=" + fmt(row.t));
    }
    const double high = im.hessian.high_mode_fraction(s.phi.values());
    if (high > kAliasingWarn) {
      result.warnings.push_back("high-mode energy fraction " + fmt(high) + " at t=" + fmt(row.t));
    }
    result.log.append(row);
    previous = row;
  };

  log_row(state, 0.0);

  double dt = dt0;
  double last_dt = 0.0;
  int streak = 0;
  bool logged_last = true;
  while (true) {
    if (residual(state) <= cfg.tol) {
      result.converged = true;
      break;
    }
    if (state.t >= cfg.t_max) break;

    int halvings = 0;
    while (true) {
      const double h = std::min(dt, cfg.t_max - state.t);
      try {
        FlowState next = step(state, h);
        const Band rt = band_of(next.ratio);
        const bool in_band = rt.lo >= ratio0.lo - cfg.slack && rt.hi <= ratio0.hi + cfg.slack;
        if (in_band) {
          state = std::move(next);
          last_dt = h;
          break;
        }
      } catch (const DegenerateMetric&) {
      }
      ++result.rejected;
      if (++halvings > cfg.max_halvings) {
        std::ostringstream msg;
        msg << "step rejected " << cfg.max_halvings << " times at t=" << fmt(state.t)
            << " (dt=" << fmt(dt) << ", residual=" << fmt(residual(state))
            << ", osc_phi=" << fmt(oscillation(state.phi)) << ")";
        throw StiffnessError(msg.str());
      }
      dt *= 0.5;
      streak = 0;
    }

    ++result.steps;
    if (++streak >= kGrowthAfter) {
      dt = std::min(dt * kGrowth, dt_cap);
      streak = 0;
    }
    logged_last = result.steps % static_cast<std::size_t>(cfg.log_every) == 0;
    if (logged_last) log_row(state, last_dt);
  }
  if (!logged_last) log_row(state, last_dt);

  result.final_residual = residual(state);
  const HermitianField chi_final = chi(state);
  if (augmented()) {
    result.cone = cone_margin_augmented(restrict_field(chi_final, im.original.n()), im.original,
                                        im.k, im.c);
  } else {
    result.cone = cone_margin(chi_final, im.original, im.k, im.c);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace sigmaflow
