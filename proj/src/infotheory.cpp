#include "qcorr/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qcorr/errors.hpp"

namespace qcorr {

double Bits::value() const {
  if (infinite_) throw Error("Bits::value: quantity is +infinity");
  return value_;
}

std::string Bits::to_string(int significant_digits) const {
  if (infinite_) return "inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value_);
  return buf;
}

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -1e-12) throw ValidationError("Pmf: negative or non-finite probability");
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("Pmf: probabilities sum to " + std::to_string(sum));
}

double shannon(const Pmf& p) {
  double h = 0.0;
  for (double x : p.probs()) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double shannon_conditional(const JointPmf& joint) {
  if (joint.probs.size() != joint.nx * joint.ny) throw DimensionError("JointPmf: grid size mismatch");
  const auto& p = joint.probs.probs();
  double h = 0.0;
  for (std::size_t y = 0; y < joint.ny; ++y) {
    double py = 0.0;
    for (std::size_t x = 0; x < joint.nx; ++x) py += p[x * joint.ny + y];
    if (py <= 0.0) continue;
    double hy = 0.0;
    for (std::size_t x = 0; x < joint.nx; ++x) {
      const double q = p[x * joint.ny + y] / py;
      if (q > 0.0) hy -= q * std::log2(q);
    }
    h += py * hy;
  }
  return h;
}

double shannon_joint_minus_marginal(const JointPmf& joint) {
  if (joint.probs.size() != joint.nx * joint.ny) throw DimensionError("JointPmf: grid size mismatch");
  const auto& p = joint.probs.probs();
  std::vector<double> py(joint.ny, 0.0);
  for (std::size_t x = 0; x < joint.nx; ++x) {
    for (std::size_t y = 0; y < joint.ny; ++y) py[y] += p[x * joint.ny + y];
  }
  double total = std::accumulate(py.begin(), py.end(), 0.0);
  for (double& v : py) v /= total;
  return shannon(joint.probs) - shannon(Pmf(py));
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double entropy_of(const ComplexMatrix& m) {
  const auto eig = herm_eig(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda < -kNegativeClip) {
      throw ValidationError("entropy: eigenvalue " + std::to_string(lambda) + " below the negativity clip");
    }
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return std::max(0.0, s);
}

double von_neumann(const DensityMatrix& state) { return entropy_of(state.matrix()); }

double mutual_information(const DensityMatrix& state, const Subsystems& party_x) {
  Subsystems x = party_x;
  std::sort(x.begin(), x.end());
  Subsystems y;
  for (std::size_t k = 0; k < state.num_subsystems(); ++k) {
    if (!std::binary_search(x.begin(), x.end(), k)) y.push_back(k);
  }
  if (x.empty() || y.empty() || x.back() >= state.num_subsystems()) {
    throw DimensionError("mutual_information: cut must split the subsystems into two nonempty groups");
  }
  const double s_x = entropy_of(partial_trace(state.matrix(), state.dims(), x));
  const double s_y = entropy_of(partial_trace(state.matrix(), state.dims(), y));
  return std::max(0.0, s_x + s_y - von_neumann(state));
}

double mutual_information(const DensityMatrix& state) {
  if (state.num_subsystems() != 2) throw DimensionError("mutual_information: expected a bipartite state");
  return mutual_information(state, {0});
}

std::optional<double> trace_rho_log2_sigma(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace_rho_log2_sigma: shape mismatch");
  }
  const auto eig = herm_eig(sigma);
  double acc = 0.0;
  double leak = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const auto& v = eig.eigenvectors.col(k);
    const double weight = (v.adjoint() * rho * v)(0, 0).real();
    const double lambda = eig.eigenvalues(k);
    if (lambda <= kSupportTol) {
      leak += weight;
    } else {
      acc += weight * std::log2(lambda);
    }
  }
  if (leak > kSupportTol) return std::nullopt;
  return acc;
}

Bits relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const auto cross = trace_rho_log2_sigma(rho, sigma);
  if (!cross) return Bits::infinity();
  return Bits::finite(std::max(0.0, -entropy_of(rho) - *cross));
}

Bits relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("relative_entropy: dims mismatch");
  return relative_entropy(rho.matrix(), sigma.matrix());
}

namespace {
void require_same_dims(const DensityMatrix& rho, const DensityMatrix& sigma, const char* op) {
  if (rho.dims() != sigma.dims()) throw DimensionError(std::string(op) + ": dims mismatch");
}
}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dims(rho, sigma, "fidelity");
  // ||sqrt(rho) sqrt(sigma)||_1 avoids square roots of near-zero eigenvalues
  const double tr = trace_norm(matrix_sqrt(rho.matrix()) * matrix_sqrt(sigma.matrix()));
  return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dims(rho, sigma, "trace_distance");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::max(0.0, 2.0 * (1.0 - std::sqrt(fidelity(rho, sigma))));
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dims(rho, sigma, "hs_distance");
  return hs_norm(rho.matrix() - sigma.matrix());
}

double distance(DistanceKind kind, const DensityMatrix& rho, const DensityMatrix& sigma) {
  switch (kind) {
    case DistanceKind::kTrace: return trace_distance(rho, sigma);
    case DistanceKind::kBures: return bures_distance(rho, sigma);
    case DistanceKind::kHilbertSchmidt: return hs_distance(rho, sigma);
  }
  throw Error("distance: unknown kind");
}

}  // namespace qcorr
