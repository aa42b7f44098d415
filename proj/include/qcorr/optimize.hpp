#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qcorr/parallel.hpp"

namespace qcorr {

/// Settings shared by every measurement optimizer: a coarse (theta, phi) grid
/// per measured qubit, then Nelder-Mead refinement from the best grid points.
struct OptimizerConfig {
  std::size_t grid_theta = 24;
  std::size_t grid_phi = 48;
  std::size_t refine_iters = 200;
  std::size_t restarts = 8;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  parallel::Execution execution = parallel::Execution::kParallel;

  /// Throws ValidationError on zero counts or non-positive tol.
  void validate() const;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with standard coefficients. Stops when the spread of simplex
/// values drops below `tol` or after `max_iters` iterations.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const std::vector<double>& step,
                           std::size_t max_iters, double tol);

/// Cell-centred angle grid for `n_qubits` Bloch directions; each point is
/// (theta_1, phi_1, ..., theta_n, phi_n).
std::vector<std::vector<double>> angle_grid(std::size_t n_qubits, std::size_t grid_theta, std::size_t grid_phi);

/// Objective values at every grid point.
std::vector<double> scan_grid(const Objective& f, const std::vector<std::vector<double>>& points,
                              parallel::Execution exec);

/// Grid scan, then `cfg.restarts` Nelder-Mead refinements seeded at the best
/// distinct grid points. Two-qubit searches use a grid coarsened by 3 per axis.
/// The result is identical for serial and parallel execution.
MinimizeResult minimize_over_directions(const Objective& f, std::size_t n_qubits, const OptimizerConfig& cfg);

}  // namespace qcorr
