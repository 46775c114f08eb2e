#include "sigmaflow_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/functionals.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string resolve(const std::string& configured, const std::string& out_dir,
                    const char* fallback) {
  if (out_dir.empty()) return configured;
  if (configured.empty()) return (fs::path(out_dir) / fallback).string();
  const fs::path p(configured);
  return p.is_absolute() ? configured : (fs::path(out_dir) / p).string();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

json constants_json(const ClassConstants& cc) {
  json c = json::array(), cp = json::array();
  for (double v : cc.c) c.push_back(v);
  for (double v : cc.c_prime) cp.push_back(v);
  return {{"c", c}, {"c_prime", cp}};
}

// Lower-bound constants with chi' = chi0 and [C1, C2] the range of
// sigma_k(chi0^{-1}); null when chi0 is outside the cone or theta is too large.
json constants_for(const HermitianField& chi0, const Background& bg, double theta) {
  const MetricFrame frame(bg.G);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t p = 0; p < chi0.size(); ++p) {
    RealTuple inv;
    for (double v : frame.eigvals(chi0[p])) inv.push_back(1.0 / v);
    const double s = sigma(bg.k, inv.span());
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  try {
    const TheoremConstants tc = theorem_constants(chi0, bg, bg.k, lo, hi, theta);
    return {{"theta", theta},           {"C1", lo},
            {"C2", hi},                 {"lambda", tc.lambda},
            {"eta", tc.eta},            {"epsilon", tc.epsilon},
            {"delta", tc.delta},        {"N", tc.N},
            {"delta_sufficient", tc.delta_sufficient},
            {"N_sufficient", tc.N_sufficient}};
  } catch (const ArgumentError&) {
  } catch (const DomainError&) {
  }
  return nullptr;
}

// Shared error handling: every library or config error is exit 1.
template <class F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const DegenerateMetric& e) {
    err << "error: degenerate metric: " << e.what() << '\n';
  } catch (const StiffnessError& e) {
    err << "error: stiffness: " << e.what() << '\n';
  } catch (const InvariantViolation& e) {
    err << "error: invariant violated: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace

json to_json(const ConeReport& cone) {
  return {{"in_cone", cone.in_cone},
          {"margin", number(cone.margin)},
          {"worst_point", cone.worst_point},
          {"worst_j", cone.worst_j}};
}

json to_json(const SuiteReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"citation", c.citation},
                      {"trials", c.trials},
                      {"failures", c.failures},
                      {"worst_violation", number(c.worst_violation)},
                      {"seed", c.seed}});
  }
  return {{"seed", report.seed},
          {"trials", report.trials},
          {"failures", report.failures()},
          {"passed", report.passed()},
          {"checks", checks}};
}

json run_report(const RunConfig& config, const RunResult& result) {
  json violations = json::array();
  for (const Violation& v : result.violations) {
    violations.push_back({{"invariant", v.invariant}, {"t", v.t}, {"amount", v.amount}});
  }
  json b = json::array();
  if (config.augmented) {
    for (double v : config.background().augment) b.push_back(v);
  }
  return {{"config",
           {{"n", config.n},
            {"k", config.k},
            {"N", config.N},
            {"mode", config.augmented ? "augmented" : "plain"},
            {"b", b},
            {"seed", config.seed}}},
          {"converged", result.converged},
          {"steps", result.steps},
          {"rejected", result.rejected},
          {"t_final", result.final_state.t},
          {"final_residual", result.final_residual},
          {"c_operator", result.c_operator},
          {"c_closed_form", result.c_closed_form ? json(*result.c_closed_form) : json(nullptr)},
          {"class_constants", constants_json(result.constants)},
          {"cone", to_json(result.cone)},
          {"violations", violations},
          {"warnings", result.warnings}};
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const Background bg = cfg.background();
    FlowSolver solver(bg, cfg.grid(), cfg.flow);
    const RunResult result = solver.run();

    const std::string csv = resolve(cfg.csv, out_dir, "run.csv");
    const std::string report = resolve(cfg.report, out_dir, "report.json");
    const std::string snap = resolve(cfg.snapshot, out_dir, "phi.snap");
    if (!csv.empty()) {
      std::ostringstream s;
      result.log.write_csv(s);
      write_file(csv, s.str());
    }
    if (!snap.empty()) {
      std::ostringstream s;
      write_snapshot(s, result.final_state.phi.restricted(cfg.n));
      write_file(snap, s.str());
    }
    const std::string text = run_report(cfg, result).dump(2) + "\n";
    if (report.empty()) {
      out << text;
    } else {
      write_file(report, text);
      out << (result.converged ? "converged" : "not converged") << " after " << result.steps
          << " steps, residual " << result.final_residual << '\n';
    }
    return result.converged ? kExitOk : kExitNegative;
  });
}

int cmd_check_cone(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const Background bg = cfg.background();
    const HermitianField chi0 = chi0_field(bg, cfg.grid());
    ConeReport cone;
    json j;
    if (cfg.augmented) {
      const FlowSolver solver(bg, cfg.grid(), cfg.flow);
      cone = cone_margin_augmented(chi0, bg, bg.k, solver.c_operator());
      j["c"] = solver.c_operator();
    } else {
      const double c = class_constants(bg).c_prime[bg.k];
      cone = cone_margin(chi0, bg, bg.k, c);
      j["c"] = c;
    }
    j["mode"] = cfg.augmented ? "augmented" : "plain";
    j["cone"] = to_json(cone);
    j["theorem_constants"] = cfg.augmented ? json(nullptr) : constants_for(chi0, bg, cfg.theta);
    out << j.dump(2) << '\n';
    return cone.in_cone ? kExitOk : kExitNegative;
  });
}

int cmd_selftest(std::uint64_t seed, std::size_t trials, const std::string& out_path,
                 bool corrupt_tolerance, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SuiteOptions opt;
    opt.corrupt_tolerance = corrupt_tolerance;
    const SuiteReport report = run_property_suite(seed, trials, opt);
    const std::string text = to_json(report).dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
      for (const CheckResult& c : report.checks) {
        out << (c.failures == 0 ? "PASS " : "FAIL ") << c.name << " failures=" << c.failures
            << "/" << c.trials << '\n';
      }
    }
    return report.passed() ? kExitOk : kExitNegative;
  });
}

int cmd_functional(const std::string& config_path, const std::string& snapshot_path,
                   const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const std::string path = snapshot_path.empty() ? cfg.snapshot : snapshot_path;
    if (path.empty()) throw ConfigError("no snapshot given (--snapshot or config key)");
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    PotentialField phi = read_snapshot(in);
    const TorusGrid grid = cfg.grid();
    if (!(phi.grid() == grid)) {
      throw ArgumentError("snapshot grid (n=" + std::to_string(phi.grid().n()) +
                          ", N=" + std::to_string(phi.grid().points()) + ", mask " +
                          phi.grid().active_string() + ") differs from the config grid (n=" +
                          std::to_string(grid.n()) + ", N=" + std::to_string(grid.points()) +
                          ")");
    }
    const Background bg = cfg.background();
    // alpha from the config, or the one matching a single augmentation entry.
    std::optional<double> alpha = cfg.alpha;
    if (!alpha && bg.augment.size() == 1) {
      alpha = binomial(bg.n(), bg.k - 1) / (bg.augment[0] * binomial(bg.n(), bg.k));
    }
    const Energy energy(bg, grid);
    const HermitianField chi = energy.chi(phi);
    const int n = bg.n();
    const int k = bg.k;
    json F = json::array();
    for (int j = 0; j <= n; ++j) F.push_back(energy.F(phi, chi, j).value);
    json j{{"n", n},
           {"k", k},
           {"F", F},
           {"F_tilde", energy.F_tilde(phi, chi, n - k)},
           {"alpha", alpha ? json(*alpha) : json(nullptr)},
           {"F_tilde_alpha",
            alpha ? json(energy.F_tilde_alpha(phi, chi, k, *alpha)) : json(nullptr)},
           {"mu_mass", energy.mu_mass(chi, k)}};
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
    }
    return kExitOk;
  });
}

}  // namespace sigmaflow::cli
