#pragma once

// Dense complex linear algebra for small multipartite operators.
//
// Subsystem ordering is row-major: for dims (d0, d1, ..., dn) the first
// subsystem is the most significant digit of a basis index, so |01> on two
// qubits is index 1 and |10> is index 2.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;
using Subsystems = std::vector<std::size_t>;

struct HermitianEig {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, unitary
};

/// Entries below this magnitude are treated as floating-point PSD drift.
inline constexpr double kNegativeClip = 1e-10;
/// Tolerance on ||M - M^dagger||_max accepted by herm_eig.
inline constexpr double kHermitianTol = 1e-9;

std::size_t total_dim(const Dims& dims);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in increasing index order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const Subsystems& keep);

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, std::size_t subsystem);

/// Reorders tensor factors: subsystem perm[k] of the input becomes subsystem k
/// of the output.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, const Subsystems& perm);
Dims permute_dims(const Dims& dims, const Subsystems& perm);

/// Largest |M_ij - conj(M_ji)|.
double hermiticity_defect(const ComplexMatrix& m);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Throws DimensionError if m is not Hermitian within kHermitianTol.
HermitianEig herm_eig(const ComplexMatrix& m);

enum class ZeroPolicy {
  kKeep,  // apply fn to every (clipped) eigenvalue
  kSkip,  // drop terms whose clipped eigenvalue is exactly zero (0 log 0 = 0)
};

/// f(M) = sum_i f(lambda_i)|i><i|. Eigenvalues in [-kNegativeClip, 0) are
/// clipped to zero; anything more negative throws when `requires_psd` is set.
ComplexMatrix spectral_fn(const ComplexMatrix& m, const std::function<double(double)>& fn,
                          ZeroPolicy zero_policy, bool requires_psd);

/// PSD square root; eigenvalues below 64 eps max|m_ij| are treated as zero.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m);
ComplexMatrix matrix_log2(const ComplexMatrix& m);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);
/// Tr[A^dagger B].
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_norm(const ComplexMatrix& m);

/// Max-abs entry difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool all_finite(const ComplexMatrix& m);

namespace pauli {
const ComplexMatrix& identity();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
/// k = 0, 1, 2 for x, y, z.
const ComplexMatrix& by_index(int k);
}  // namespace pauli

}  // namespace qcorr
