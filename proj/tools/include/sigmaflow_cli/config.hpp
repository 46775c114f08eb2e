#pragma once

// Flat key = value run configuration.
//
//   n, k, N          dimension, operator order, grid points per axis
//   mode             plain | augmented
//   b                extra eigenvalues (augmented)
//   alpha            alternative to b: b = (C(n,k-1) / (alpha C(n,k)))
//   G_re, G_im       omega, n*n row-major entries (default identity)
//   H_re, H_im       constant part of chi0 (default identity)
//   psi0_mode        2n integer wave numbers, amplitude, phase; repeatable
//   dt0, t_max, tol, log_every, slack, strict
//   theta, seed
//   csv, report, snapshot   output paths
//
// Numbers accept products and quotients with pi, e.g. "0.1/pi^2" or "-pi/2".
// '#' starts a comment.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmaflow/flow.hpp"
#include "sigmaflow/geometry.hpp"

namespace sigmaflow::cli {

/// Message carries "source:LINE: ..." when a line is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModeSpec {
  std::vector<int> wave;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct RunConfig {
  int n = 2;
  int k = 1;
  int N = 16;
  bool augmented = false;
  std::vector<double> b;
  std::optional<double> alpha;
  std::vector<double> G_re, G_im, H_re, H_im;
  std::vector<ModeSpec> psi0;
  FlowConfig flow;
  double theta = 0.1;
  std::uint64_t seed = 0;
  std::string csv, report, snapshot;

  TorusGrid grid() const;
  /// Background in the original dimension (b attached in augmented mode).
  Background background() const;
};

double parse_number(const std::string& token);

RunConfig parse_config(std::istream& in, const std::string& source = "config");
RunConfig load_config(const std::string& path);

}  // namespace sigmaflow::cli
