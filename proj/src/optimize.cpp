#include "qcorr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qcorr/errors.hpp"

namespace qcorr {

void OptimizerConfig::validate() const {
  if (grid_theta == 0 || grid_phi == 0 || refine_iters == 0 || restarts == 0) {
    throw ValidationError("OptimizerConfig: all counts must be >= 1");
  }
  if (!(tol > 0.0)) throw ValidationError("OptimizerConfig: tol must be positive");
}

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const std::vector<double>& step,
                           std::size_t max_iters, double tol) {
  const std::size_t n = x0.size();
  MinimizeResult res;
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);
  res.evaluations = n + 1;

  std::vector<std::size_t> order(n + 1);
  auto point_at = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coef) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + coef * (worst[k] - centroid[k]);
    return p;
  };

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double x_spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) x_spread = std::max(x_spread, std::abs(simplex[i][k] - simplex[best][k]));
    }
    if (values[worst] - values[best] <= tol && x_spread <= 1e-4) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }

    auto reflected = point_at(centroid, simplex[worst], -1.0);
    const double f_r = f(reflected);
    ++res.evaluations;
    if (f_r < values[best]) {
      auto expanded = point_at(centroid, simplex[worst], -2.0);
      const double f_e = f(expanded);
      ++res.evaluations;
      if (f_e < f_r) {
        simplex[worst] = std::move(expanded);
        values[worst] = f_e;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = f_r;
      }
      continue;
    }
    if (f_r < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = f_r;
      continue;
    }
    const bool outside = f_r < values[worst];
    auto contracted = point_at(centroid, outside ? reflected : simplex[worst], 0.5);
    const double f_c = f(contracted);
    ++res.evaluations;
    if (f_c < (outside ? f_r : values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = f_c;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      values[i] = f(simplex[i]);
      ++res.evaluations;
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  res.x = simplex[best];
  res.value = values[best];
  return res;
}

std::vector<std::vector<double>> angle_grid(std::size_t n_qubits, std::size_t grid_theta, std::size_t grid_phi) {
  std::vector<std::vector<double>> points{{}};
  for (std::size_t q = 0; q < n_qubits; ++q) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * grid_theta * grid_phi);
    for (const auto& base : points) {
      for (std::size_t i = 0; i < grid_theta; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * M_PI / static_cast<double>(grid_theta);
        for (std::size_t j = 0; j < grid_phi; ++j) {
          const double phi = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(grid_phi);
          auto p = base;
          p.push_back(theta);
          p.push_back(phi);
          next.push_back(std::move(p));
        }
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<double> scan_grid(const Objective& f, const std::vector<std::vector<double>>& points,
                              parallel::Execution exec) {
  return parallel::map<double>(exec, points.size(), [&](std::size_t i) { return f(points[i]); });
}

MinimizeResult minimize_over_directions(const Objective& f, std::size_t n_qubits, const OptimizerConfig& cfg) {
  cfg.validate();
  if (n_qubits == 0) throw ValidationError("minimize_over_directions: need at least one direction");
  const std::size_t coarsen = n_qubits > 1 ? 3 : 1;
  const std::size_t gt = std::max<std::size_t>(2, cfg.grid_theta / coarsen);
  const std::size_t gp = std::max<std::size_t>(2, cfg.grid_phi / coarsen);
  const auto points = angle_grid(n_qubits, gt, gp);
  const auto values = scan_grid(f, points, cfg.execution);

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const double dtheta = M_PI / static_cast<double>(gt);
  const double dphi = 2.0 * M_PI / static_cast<double>(gp);
  auto is_neighbour = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); k += 2) {
      if (std::abs(a[k] - b[k]) > 1.5 * dtheta) return false;
      double dp = std::abs(a[k + 1] - b[k + 1]);
      dp = std::min(dp, 2.0 * M_PI - dp);
      if (dp > 1.5 * dphi) return false;
    }
    return true;
  };

  std::vector<std::size_t> seeds;
  for (std::size_t idx : order) {
    if (seeds.size() >= cfg.restarts) break;
    bool close = false;
    for (std::size_t s : seeds) close = close || is_neighbour(points[idx], points[s]);
    if (!close) seeds.push_back(idx);
  }

  const auto refined = parallel::map<MinimizeResult>(cfg.execution, seeds.size(), [&](std::size_t r) {
    std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + r);
    std::uniform_real_distribution<double> jitter(0.75, 1.25);
    std::vector<double> step(points[seeds[r]].size());
    for (std::size_t k = 0; k < step.size(); ++k) step[k] = 0.5 * (k % 2 == 0 ? dtheta : dphi) * jitter(rng);
    return nelder_mead(f, points[seeds[r]], step, cfg.refine_iters, cfg.tol);
  });

  MinimizeResult best;
  best.value = values[order.front()];
  best.x = points[order.front()];
  best.evaluations = points.size();
  bool improved = false;
  bool any_converged = false;
  for (const auto& r : refined) {
    best.evaluations += r.evaluations;
    any_converged = any_converged || r.converged;
    if (r.value < best.value) {
      best.value = r.value;
      best.x = r.x;
      best.converged = r.converged;
      improved = true;
    }
  }
  // A grid point no refinement could beat is a converged minimum if any run settled.
  if (!improved) best.converged = any_converged;
  return best;
}

}  // namespace qcorr
