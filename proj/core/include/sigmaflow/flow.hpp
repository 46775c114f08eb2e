#pragma once

// Explicit time integration of
//   d phi / dt = c'^{1/k} - (sigma_{n-k}(chi_phi) / sigma_n(chi_phi))^{1/k},  phi(0) = 0,
// with the augmented variant realized as the plain flow on a lifted torus.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sigmaflow/cone.hpp"
#include "sigmaflow/functionals.hpp"
#include "sigmaflow/geometry.hpp"
#include "sigmaflow/spectral.hpp"

namespace sigmaflow {

struct FlowConfig {
  double dt0 = 0.0;  ///< 0 selects 0.5 / Lambda_0
  double t_max = 50.0;
  double tol = 1e-6;
  int log_every = 10;
  double slack = 1e-6;
  int max_halvings = 20;
  /// Invariant failures throw InvariantViolation instead of being recorded.
  bool strict = false;
};

struct FlowState {
  double t = 0.0;
  PotentialField phi;
  std::vector<double> phidot;  ///< rhs at phi
  std::vector<double> ratio;   ///< sigma_{n-k}/sigma_n of chi_phi
};

struct RunRow {
  double t = 0.0;
  double dt = 0.0;
  double residual_sup = 0.0;
  double F_tilde = 0.0;
  double F_nk = 0.0;
  double mu_mass = 0.0;
  double chi_min_eig = 0.0;
  double chi_max_eig = 0.0;
  double osc_phi = 0.0;
  double phidot_min = 0.0;
  double phidot_max = 0.0;
  double sigma_ratio_min = 0.0;
  double sigma_ratio_max = 0.0;
};

class RunLog {
 public:
  static const std::vector<std::string>& columns();

  void append(const RunRow& row) { rows_.push_back(row); }
  const std::vector<RunRow>& rows() const noexcept { return rows_; }

  void write_csv(std::ostream& out) const;

 private:
  std::vector<RunRow> rows_;
};

struct Violation {
  std::string invariant;
  double t = 0.0;
  double amount = 0.0;  ///< how far past the allowed bound
};

struct RunResult {
  bool converged = false;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double final_residual = 0.0;
  double c_operator = 0.0;  ///< c'_k of the (lifted) class
  /// Augmented mode: closed-form constant from the class constants of M.
  std::optional<double> c_closed_form;
  ClassConstants constants;  ///< class constants of M
  ConeReport cone;
  RunLog log;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  FlowState final_state;
};

class FlowSolver {
 public:
  FlowSolver(const Background& bg, const TorusGrid& grid, FlowConfig config = {});
  ~FlowSolver();
  FlowSolver(const FlowSolver&) = delete;
  FlowSolver& operator=(const FlowSolver&) = delete;

  /// Background and grid the flow actually runs on (lifted in augmented mode).
  const Background& working_background() const noexcept;
  const TorusGrid& working_grid() const noexcept;
  bool augmented() const noexcept;
  double c_operator() const noexcept;
  const FlowConfig& config() const noexcept;

  /// State at time 0 with the given potential (zero by default), on the working grid.
  FlowState initial_state() const;
  FlowState initial_state(const PotentialField& phi) const;

  /// Pointwise c'^{1/k} - q^{1/k}; throws DegenerateMetric.
  PotentialField rhs(const FlowState& state) const;

  /// sup |sigma_{n-k}/sigma_n - c'| over the grid.
  double residual(const FlowState& state) const;

  /// One classical RK4 step with no acceptance test.
  FlowState step(const FlowState& state, double dt) const;

  /// chi_phi of the state (working dimension).
  HermitianField chi(const FlowState& state) const;

  /// Automatic initial step 0.5 / Lambda_0, Lambda_0 = max sum F^{ii} (pi N)^2.
  double automatic_dt() const;

  /// Integrates from phi = 0 until the residual drops to tol or t reaches t_max.
  RunResult run() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Top-left n x n block of every matrix in the field.
HermitianField restrict_field(const HermitianField& field, int n);

}  // namespace sigmaflow
