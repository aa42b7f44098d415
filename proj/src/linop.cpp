#include "qcorr/linop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void require_square(const ComplexMatrix& m, const Dims& dims, const char* op) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(op) + ": matrix is not square");
  }
  if (dims.empty() || static_cast<Eigen::Index>(total_dim(dims)) != m.rows()) {
    throw DimensionError(std::string(op) + ": product of subsystem dims " +
                         std::to_string(total_dim(dims)) + " does not match matrix size " +
                         std::to_string(m.rows()));
  }
}

// Offsets of every combined index over `subs` (in the given order) into the
// full space described by `strides`.
std::vector<std::size_t> offsets_for(const Dims& dims, const std::vector<std::size_t>& strides,
                                     const Subsystems& subs) {
  std::vector<std::size_t> offsets{0};
  for (std::size_t s : subs) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (std::size_t base : offsets) {
      for (std::size_t d = 0; d < dims[s]; ++d) next.push_back(base + d * strides[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const Subsystems& keep) {
  require_square(m, dims, "partial_trace");
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  Subsystems kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.back() >= dims.size()) {
    throw DimensionError("partial_trace: invalid subsystem indices");
  }
  Subsystems traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  const auto kept_off = offsets_for(dims, strides, kept);
  const auto traced_off = offsets_for(dims, strides, traced);

  const auto n = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      for (std::size_t t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[r] + t), static_cast<Eigen::Index>(kept_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, std::size_t subsystem) {
  require_square(m, dims, "partial_transpose");
  if (subsystem >= dims.size()) throw DimensionError("partial_transpose: subsystem out of range");
  const auto strides = strides_of(dims);
  const std::size_t st = strides[subsystem];
  const std::size_t d = dims[subsystem];
  const auto n = m.rows();
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t di = (static_cast<std::size_t>(i) / st) % d;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t dj = (static_cast<std::size_t>(j) / st) % d;
      const auto src_i = static_cast<Eigen::Index>(static_cast<std::size_t>(i) - di * st + dj * st);
      const auto src_j = static_cast<Eigen::Index>(static_cast<std::size_t>(j) - dj * st + di * st);
      out(i, j) = m(src_i, src_j);
    }
  }
  return out;
}

Dims permute_dims(const Dims& dims, const Subsystems& perm) {
  Dims out;
  out.reserve(perm.size());
  for (std::size_t p : perm) out.push_back(dims.at(p));
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, const Subsystems& perm) {
  require_square(m, dims, "permute_subsystems");
  Subsystems check = perm;
  std::sort(check.begin(), check.end());
  for (std::size_t k = 0; k < check.size(); ++k) {
    if (check[k] != k || check.size() != dims.size()) {
      throw DimensionError("permute_subsystems: not a permutation of the subsystems");
    }
  }
  const auto old_strides = strides_of(dims);
  // offsets_for enumerates new-order multi-indices row-major, yielding old indices.
  const auto map = offsets_for(dims, old_strides, perm);
  const auto n = m.rows();
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianEig herm_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("herm_eig: matrix is not square");
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTol)) {
    throw DimensionError("herm_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver did not converge");
  const auto n = m.rows();
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ComplexMatrix spectral_fn(const ComplexMatrix& m, const std::function<double(double)>& fn,
                          ZeroPolicy zero_policy, bool requires_psd) {
  const auto eig = herm_eig(m);
  const auto n = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double lambda = eig.eigenvalues(k);
    if (lambda < 0.0 && lambda >= -kNegativeClip) lambda = 0.0;
    if (requires_psd && lambda < 0.0) {
      throw ValidationError("spectral_fn: eigenvalue " + std::to_string(lambda) +
                            " below the negativity clip");
    }
    if (zero_policy == ZeroPolicy::kSkip && lambda == 0.0) continue;
    const auto& v = eig.eigenvectors.col(k);
    out.noalias() += fn(lambda) * (v * v.adjoint());
  }
  return out;
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) {
  // Eigenvalues at rounding level are zeroed: sqrt would lift 1e-17 to 3e-9.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.cwiseAbs().maxCoeff());
  return spectral_fn(m, [floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); }, ZeroPolicy::kKeep, true);
}

ComplexMatrix matrix_log2(const ComplexMatrix& m) {
  return spectral_fn(m, [](double x) { return std::log2(x); }, ZeroPolicy::kSkip, true);
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

double hs_norm(const ComplexMatrix& m) { return std::sqrt(std::max(0.0, hs_inner(m, m).real())); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

namespace pauli {

const ComplexMatrix& identity() {
  static const ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  return m;
}

const ComplexMatrix& x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix p(2, 2);
    p << 0.0, 1.0, 1.0, 0.0;
    return p;
  }();
  return m;
}

const ComplexMatrix& y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix p(2, 2);
    p << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return p;
  }();
  return m;
}

const ComplexMatrix& z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix p(2, 2);
    p << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return m;
}

const ComplexMatrix& by_index(int k) {
  switch (k) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw DimensionError("pauli::by_index: index must be 0, 1 or 2");
  }
}

}  // namespace pauli

}  // namespace qcorr
