// Relative entropy of entanglement, upper bound.
//
// f(sigma) = S(rho||sigma) is convex on the separable set, whose extreme
// points are pure product states. We run a fully corrective conditional
// gradient method on sigma = sum_i q_i |a_i b_i><a_i b_i|:
//   1. linear step: find the product state maximizing <ab|G|ab>, where G is
//      the derivative of Tr[rho ln sigma] (alternating top-eigenvector
//      iterations from several starts);
//   2. exact line search towards it;
//   3. reweight all terms with q_i <- q_i <a_i b_i|G|a_i b_i>, which keeps
//      sum q_i = 1 because Tr[sigma G] = Tr[rho] = 1.
// The duality gap max<ab|G|ab> - 1 bounds the remaining suboptimality.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "qcorr/correlations.hpp"
#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kEigFloor = 1e-13;

struct Atom {
  double weight;
  ComplexVector a;
  ComplexVector b;
  ComplexVector v;  // a (x) b
};

ComplexVector kron_vec(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

ComplexMatrix assemble(const std::vector<Atom>& atoms, Eigen::Index n) {
  ComplexMatrix sigma = ComplexMatrix::Zero(n, n);
  for (const auto& at : atoms) sigma.noalias() += at.weight * (at.v * at.v.adjoint());
  return sigma;
}

class ReeObjective {
 public:
  ReeObjective(const ComplexMatrix& rho, double entropy) : rho_(rho), entropy_(entropy) {}

  // S(rho||sigma) in bits, or +inf when rho leaks out of sigma's support.
  double value(const ComplexMatrix& sigma) const {
    const auto cross = trace_rho_log2_sigma(rho_, hermitian_part(sigma));
    if (!cross) return INFINITY;
    return -entropy_ - *cross;
  }

  // Derivative of Tr[rho ln sigma] with respect to sigma (PSD, Tr[sigma G] = 1).
  ComplexMatrix gradient(const ComplexMatrix& sigma) const {
    const auto eig = herm_eig(hermitian_part(sigma));
    const auto n = sigma.rows();
    const ComplexMatrix r = eig.eigenvectors.adjoint() * rho_ * eig.eigenvectors;
    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double lj = std::max(eig.eigenvalues(j), kEigFloor);
      for (Eigen::Index k = 0; k < n; ++k) {
        const double lk = std::max(eig.eigenvalues(k), kEigFloor);
        const double loewner = std::abs(lj - lk) > 1e-12 * std::max(lj, lk)
                                   ? (std::log(lj) - std::log(lk)) / (lj - lk)
                                   : 1.0 / lj;
        g(j, k) = r(j, k) * loewner;
      }
    }
    return hermitian_part(eig.eigenvectors * g * eig.eigenvectors.adjoint());
  }

 private:
  const ComplexMatrix& rho_;
  double entropy_;
};

ComplexVector top_eigenvector(const ComplexMatrix& m, double* value) {
  const auto eig = herm_eig(hermitian_part(m));
  if (value) *value = eig.eigenvalues(0);
  return eig.eigenvectors.col(0);
}

// Product state maximizing <ab|G|ab> by alternating maximization.
struct ProductCandidate {
  double score;
  ComplexVector a;
  ComplexVector b;
};

ProductCandidate best_product(const ComplexMatrix& g, Eigen::Index dx, Eigen::Index dy, std::size_t random_starts,
                              std::mt19937_64& rng) {
  std::vector<std::pair<ComplexVector, ComplexVector>> starts;
  {
    const ComplexVector top = top_eigenvector(g, nullptr);
    ComplexMatrix reshaped(dx, dy);
    for (Eigen::Index i = 0; i < dx; ++i) {
      for (Eigen::Index j = 0; j < dy; ++j) reshaped(i, j) = top(i * dy + j);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(reshaped, Eigen::ComputeFullU | Eigen::ComputeFullV);
    starts.emplace_back(svd.matrixU().col(0), svd.matrixV().col(0).conjugate());
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < random_starts; ++s) {
    ComplexVector b(dy);
    for (Eigen::Index j = 0; j < dy; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      b(j) = Complex(re, im);
    }
    starts.emplace_back(ComplexVector::Zero(dx), b / b.norm());
  }

  ProductCandidate best{-INFINITY, {}, {}};
  for (auto& [a, b] : starts) {
    double prev = -INFINITY;
    double score = -INFINITY;
    for (int it = 0; it < 100; ++it) {
      ComplexMatrix ma = ComplexMatrix::Zero(dx, dx);
      for (Eigen::Index i = 0; i < dx; ++i) {
        for (Eigen::Index ip = 0; ip < dx; ++ip) {
          ma(i, ip) = (b.adjoint() * g.block(i * dy, ip * dy, dy, dy) * b)(0, 0);
        }
      }
      a = top_eigenvector(ma, nullptr);
      ComplexMatrix mb = ComplexMatrix::Zero(dy, dy);
      for (Eigen::Index i = 0; i < dx; ++i) {
        for (Eigen::Index ip = 0; ip < dx; ++ip) mb += std::conj(a(i)) * a(ip) * g.block(i * dy, ip * dy, dy, dy);
      }
      b = top_eigenvector(mb, &score);
      if (score - prev < 1e-14) break;
      prev = score;
    }
    if (score > best.score) best = {score, a, b};
  }
  return best;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

std::vector<ProductTerm> to_terms(const std::vector<Atom>& atoms) {
  std::vector<ProductTerm> out;
  for (const auto& at : atoms) out.push_back({at.weight, at.a, at.b});
  return out;
}

ComplexVector basis_vector(Eigen::Index d, Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

// Caratheodory step: remove one term without changing sigma by moving the
// weights along an affine dependency among the projectors.
void reduce_support(std::vector<Atom>& atoms) {
  const auto m = static_cast<Eigen::Index>(atoms.size());
  const Eigen::Index n = atoms.front().v.size();
  Eigen::MatrixXd coords(n * n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const ComplexMatrix p = atoms[c].v * atoms[c].v.adjoint();
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      coords(row++, c) = p(i, i).real();
      for (Eigen::Index j = i + 1; j < n; ++j) {
        coords(row++, c) = p(i, j).real();
        coords(row++, c) = p(i, j).imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeFullV);
  Eigen::VectorXd c = svd.matrixV().col(m - 1);
  if (c.maxCoeff() <= 0.0) c = -c;
  double t = INFINITY;
  Eigen::Index drop = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (c(i) > 1e-12 && atoms[i].weight / c(i) < t) {
      t = atoms[i].weight / c(i);
      drop = i;
    }
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    atoms[i].weight = std::max(0.0, atoms[i].weight - t * c(i));
    if (i != drop) total += atoms[i].weight;
  }
  atoms.erase(atoms.begin() + drop);
  for (auto& at : atoms) at.weight /= total;
}

}  // namespace

MeasureResult ree_upper(const DensityMatrix& state, const Subsystems& party, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n_sub = state.num_subsystems();
  Subsystems x = party;
  std::sort(x.begin(), x.end());
  Subsystems perm = x;
  for (std::size_t k = 0; k < n_sub; ++k) {
    if (!std::binary_search(x.begin(), x.end(), k)) perm.push_back(k);
  }
  if (x.empty() || perm.size() != n_sub || x.size() == n_sub || x.back() >= n_sub) {
    throw DimensionError("ree_upper: cut must split the subsystems into two nonempty groups");
  }
  if (state.dim() > 16) {
    throw UnsupportedError("ree_upper: total dimension " + std::to_string(state.dim()) + " exceeds 16");
  }
  const ComplexMatrix rho = permute_subsystems(state.matrix(), state.dims(), perm);
  Eigen::Index dx = 1;
  for (std::size_t k : x) dx *= static_cast<Eigen::Index>(state.dims()[k]);
  const Eigen::Index n = rho.rows();
  const Eigen::Index dy = n / dx;
  const std::size_t max_terms = static_cast<std::size_t>(n * n);

  const double entropy = entropy_of(rho);
  const ReeObjective objective(rho, entropy);

  // Start from rho_X (x) rho_Y in its eigenbasis, whose value is I(X:Y).
  std::vector<Atom> atoms;
  {
    const auto ex = herm_eig(partial_trace(rho, {static_cast<std::size_t>(dx), static_cast<std::size_t>(dy)}, {0}));
    const auto ey = herm_eig(partial_trace(rho, {static_cast<std::size_t>(dx), static_cast<std::size_t>(dy)}, {1}));
    for (Eigen::Index i = 0; i < dx; ++i) {
      for (Eigen::Index j = 0; j < dy; ++j) {
        const double w = std::max(0.0, ex.eigenvalues(i)) * std::max(0.0, ey.eigenvalues(j));
        if (w <= 0.0) continue;
        const ComplexVector a = ex.eigenvectors.col(i);
        const ComplexVector b = ey.eigenvectors.col(j);
        atoms.push_back({w, a, b, kron_vec(a, b)});
      }
    }
    double total = 0.0;
    for (const auto& at : atoms) total += at.weight;
    for (auto& at : atoms) at.weight /= total;
  }

  std::mt19937_64 rng(cfg.seed ^ 0xA5A5A5A5ULL);
  ComplexMatrix sigma = assemble(atoms, n);
  double value = objective.value(sigma);
  std::size_t evaluations = 1;
  double gap = INFINITY;
  const std::size_t max_outer = std::max<std::size_t>(cfg.refine_iters, 200) * 3;
  const double gap_tol = std::max(cfg.tol, 1e-9);

  for (std::size_t outer = 0; outer < max_outer; ++outer) {
    const ComplexMatrix g = objective.gradient(sigma);
    const auto cand = best_product(g, dx, dy, cfg.restarts, rng);
    gap = (cand.score - 1.0) / kLn2;
    if (gap <= gap_tol) break;

    const ComplexVector v = kron_vec(cand.a, cand.b);
    const ComplexMatrix target = v * v.adjoint();
    auto along = [&](double gamma) {
      ++evaluations;
      return objective.value((1.0 - gamma) * sigma + gamma * target);
    };
    const double gamma = golden_section(along, 0.0, 1.0, 40);
    const double moved = along(gamma);
    if (moved < value) {
      for (auto& at : atoms) at.weight *= (1.0 - gamma);
      atoms.push_back({gamma, cand.a, cand.b, v});
      sigma = assemble(atoms, n);
      value = moved;
    }

    // Fully corrective reweighting with a monotone safeguard.
    for (int inner = 0; inner < 25; ++inner) {
      const ComplexMatrix gi = objective.gradient(sigma);
      std::vector<double> proposal(atoms.size());
      double total = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        proposal[i] = atoms[i].weight * std::max(0.0, (atoms[i].v.adjoint() * gi * atoms[i].v)(0, 0).real());
        total += proposal[i];
      }
      if (!(total > 0.0)) break;
      bool accepted = false;
      for (double eta = 1.0; eta > 1e-3; eta *= 0.5) {
        std::vector<Atom> trial = atoms;
        for (std::size_t i = 0; i < trial.size(); ++i) {
          trial[i].weight = (1.0 - eta) * atoms[i].weight + eta * proposal[i] / total;
        }
        const ComplexMatrix s = assemble(trial, n);
        const double fv = objective.value(s);
        ++evaluations;
        if (fv < value) {
          const double gain = value - fv;
          atoms = std::move(trial);
          sigma = s;
          value = fv;
          accepted = gain > 1e-15;
          break;
        }
      }
      if (!accepted) break;
    }

    atoms.erase(std::remove_if(atoms.begin(), atoms.end(), [](const Atom& at) { return at.weight < 1e-15; }),
                atoms.end());
    if (atoms.size() > max_terms) {
      while (atoms.size() > max_terms) reduce_support(atoms);
      sigma = assemble(atoms, n);
      value = objective.value(sigma);
    }
  }

  MeasureResult out;
  out.measurement_class = "separable decomposition";
  out.decomposition = to_terms(atoms);

  // Sanity cap: the state dephased in the computational product basis is separable.
  std::vector<Atom> diag_atoms;
  for (Eigen::Index i = 0; i < dx; ++i) {
    for (Eigen::Index j = 0; j < dy; ++j) {
      const double w = rho(i * dy + j, i * dy + j).real();
      if (w > 0.0) {
        const ComplexVector a = basis_vector(dx, i);
        const ComplexVector b = basis_vector(dy, j);
        diag_atoms.push_back({w, a, b, kron_vec(a, b)});
      }
    }
  }
  const double cap = objective.value(assemble(diag_atoms, n));
  if (cap < value) {
    value = cap;
    out.decomposition = to_terms(diag_atoms);
  }

  out.value = Bits::finite(std::max(0.0, value));
  out.evaluations = evaluations;
  out.converged = gap <= gap_tol || value <= gap_tol;
  // Pure states: E_R equals the entanglement entropy, so reaching it is optimal.
  if (!out.converged && purity(state) > 1.0 - 1e-9) {
    out.converged = value <= entropy_of(partial_trace(rho, {static_cast<std::size_t>(dx), static_cast<std::size_t>(dy)}, {0})) + gap_tol;
  }
  return out;
}

MeasureResult ree_upper(const DensityMatrix& state, const OptimizerConfig& cfg) {
  if (state.num_subsystems() != 2) throw DimensionError("ree_upper: expected a bipartite state");
  return ree_upper(state, {0}, cfg);
}

}  // namespace qcorr
