#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qcorr/linop.hpp"

namespace qcorr {

using BlochVector = Eigen::Vector3d;
using RealMatrix3 = Eigen::Matrix3d;

inline constexpr double kTraceTol = 1e-9;

/// A positive unit-trace operator together with its subsystem signature.
/// Instances only come out of `validate` (or constructors that call it), so
/// holding one means the invariants were checked.
class DensityMatrix {
 public:
  const Dims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return mat_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  std::size_t num_subsystems() const { return dims_.size(); }

  friend DensityMatrix validate(const ComplexMatrix& m, const Dims& dims);

 private:
  DensityMatrix(Dims dims, ComplexMatrix mat) : dims_(std::move(dims)), mat_(std::move(mat)) {}

  Dims dims_;
  ComplexMatrix mat_;
};

/// Checks dims, finiteness, Hermiticity (1e-9), trace (1e-9) and positivity
/// (min eigenvalue >= -1e-10); stores the Hermitian part. Throws
/// ValidationError naming the measured defect.
DensityMatrix validate(const ComplexMatrix& m, const Dims& dims);

DensityMatrix from_pure(const ComplexVector& amplitudes, const Dims& dims);
DensityMatrix reduced(const DensityMatrix& state, const Subsystems& keep);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix permute(const DensityMatrix& state, const Subsystems& perm);
DensityMatrix maximally_mixed(const Dims& dims);
double purity(const DensityMatrix& state);

/// Two-qubit Pauli representation: a_i = Tr[(s_i x 1) rho], b_j = Tr[(1 x s_j) rho],
/// corr_kl = Tr[(s_k x s_l) rho].
struct TwoQubitForm {
  BlochVector a = BlochVector::Zero();
  BlochVector b = BlochVector::Zero();
  RealMatrix3 corr = RealMatrix3::Zero();
};

TwoQubitForm two_qubit_form(const DensityMatrix& state);
DensityMatrix from_two_qubit_form(const TwoQubitForm& form);

/// Bloch vector of a single-qubit operator.
BlochVector bloch_vector(const ComplexMatrix& qubit_op);
/// (1 + v.sigma)/2.
ComplexMatrix bloch_operator(const BlochVector& v);

// Named states. Bell vectors use the computational ordering |00>,|01>,|10>,|11>.
ComplexVector singlet_vector();      // (|01> - |10>)/sqrt2
ComplexVector psi_plus_vector();     // (|01> + |10>)/sqrt2

/// p |psi-><psi-| + (1-p) 1/4, p in [0, 1].
DensityMatrix werner(double p);

/// (1-k)/4 |psi+><psi+| + (1+3k)/4 |psi-><psi-| + (1-2t-k)/4 |00><00| + (1+2t-k)/4 |11><11|.
/// All four weights must be nonnegative.
DensityMatrix sigma_family(double k, double t);

/// Haar-random pure state: normalized complex Gaussian vector.
DensityMatrix random_pure(const Dims& dims, std::uint64_t seed);
/// Partial trace over an ancilla of a Haar pure state on system x ancilla.
DensityMatrix random_mixed(const Dims& dims, std::size_t ancilla_dim, std::uint64_t seed);
/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);
/// Haar-random unit vector in C^dim.
ComplexVector random_unit_vector(std::size_t dim, std::uint64_t seed);

/// JSON state file: {"dims":[..],"matrix":[[[re,im],...],...]}, 17 significant digits.
std::string state_to_json(const DensityMatrix& state);
DensityMatrix state_from_json(const std::string& text);
DensityMatrix read_state(const std::filesystem::path& path);
void write_state(const DensityMatrix& state, const std::filesystem::path& path);

}  // namespace qcorr
