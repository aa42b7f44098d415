#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcorr/infotheory.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

inline constexpr double kCompletenessTol = 1e-9;
/// Outcomes below this probability carry no post-measurement state.
inline constexpr double kNullOutcome = 1e-12;

/// Completely positive trace-preserving map, Lambda(rho) = sum_i E_i rho E_i^dagger.
class KrausChannel {
 public:
  /// Checks sum_i E_i^dagger E_i = 1 within kCompletenessTol.
  explicit KrausChannel(std::vector<ComplexMatrix> ops);

  const std::vector<ComplexMatrix>& ops() const { return ops_; }
  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }

  static KrausChannel identity(std::size_t dim);

 private:
  std::vector<ComplexMatrix> ops_;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
};

/// Positive operator-valued measure: PSD elements summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elems);
  const std::vector<ComplexMatrix>& elems() const { return elems_; }
  std::size_t dim() const { return static_cast<std::size_t>(elems_.front().rows()); }
  std::size_t size() const { return elems_.size(); }

 private:
  std::vector<ComplexMatrix> elems_;
};

/// Complete set of rank-one orthogonal projectors.
class VonNeumannBasis {
 public:
  explicit VonNeumannBasis(std::vector<ComplexMatrix> projectors);
  /// Projectors onto the columns of a unitary.
  static VonNeumannBasis from_unitary(const ComplexMatrix& u);

  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  std::size_t dim() const { return static_cast<std::size_t>(projectors_.front().rows()); }
  Povm as_povm() const { return Povm(projectors_); }

 private:
  std::vector<ComplexMatrix> projectors_;
};

struct MeasurementRecord {
  Pmf probs;
  /// Empty for outcomes with probability < kNullOutcome.
  std::vector<std::optional<DensityMatrix>> post_states;
};

/// Output dims default to the input dims when the channel is square, else {out_dim}.
DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& state, const Dims& out_dims = {});

/// Tensors each operator with identities on every other subsystem.
std::vector<ComplexMatrix> local_embed(const std::vector<ComplexMatrix>& ops, std::size_t subsystem,
                                       const Dims& dims);
KrausChannel local_embed(const KrausChannel& ch, std::size_t subsystem, const Dims& dims);

/// Kraus-form post states E_i rho E_i^dagger / p_i.
MeasurementRecord measure_kraus(const KrausChannel& ch, const DensityMatrix& state);
/// Bare POVM post states use sqrt(M_i) rho sqrt(M_i) / p_i.
MeasurementRecord measure_povm(const Povm& povm, const DensityMatrix& state);

/// Measures `subsystem` with `povm`; the record holds p_i = Tr[(M_i x 1) rho]
/// and the conditional states Tr_subsystem[(M_i x 1) rho] / p_i of the rest.
MeasurementRecord measure_local(const Povm& povm, std::size_t subsystem, const DensityMatrix& state);

/// sum_i (Pi_i on subsystem) rho (Pi_i on subsystem).
DensityMatrix dephase(const VonNeumannBasis& basis, std::size_t subsystem, const DensityMatrix& state);
ComplexMatrix dephase_matrix(const VonNeumannBasis& basis, std::size_t subsystem, const ComplexMatrix& m,
                             const Dims& dims);

/// Unit Bloch direction (sin t cos p, sin t sin p, cos t).
BlochVector bloch_direction(double theta, double phi);
/// Projectors (1 +/- alpha.sigma)/2 along alpha(theta, phi).
VonNeumannBasis qubit_basis(double theta, double phi);
VonNeumannBasis qubit_basis(const BlochVector& direction);

/// Random channel from a Haar isometry C^in -> C^out (x) C^n_kraus.
KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t n_kraus, std::uint64_t seed);

}  // namespace qcorr
