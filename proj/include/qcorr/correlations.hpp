#pragma once

// Entanglement and discord-type correlation measures.
//
// Measured-side convention: a measure written X|Y in the literature measures
// subsystem X. Every function here takes the measured subsystem explicitly,
// either as a Side for bipartite states or as a subsystem index for
// multipartite ones (the remaining subsystems then form the other party).
// So D^{B|A} is discord_hv(state, Side::B) and Delta^{A|B} is
// one_way_deficit(state, Side::A).
//
// All optimizations over measurements are restricted to rank-one projective
// measurements on a qubit ("projective class"); MeasureResult records this.

#include <optional>
#include <string>
#include <vector>

#include "qcorr/infotheory.hpp"
#include "qcorr/measure.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr {

enum class Side { A, B };

inline std::size_t subsystem_of(Side side) { return side == Side::A ? 0 : 1; }

/// One pure product term q |a><a| (x) |b><b| of a separable decomposition.
struct ProductTerm {
  double weight = 0.0;
  ComplexVector a;
  ComplexVector b;
};

struct MeasureResult {
  Bits value = Bits::finite(0.0);
  /// Optimal measurement as (theta, phi) per measured qubit, when the measure
  /// optimizes over local bases.
  std::vector<double> angles;
  /// Closest separable state found, for the relative entropy of entanglement.
  std::vector<ProductTerm> decomposition;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string measurement_class = "projective";

  double bits() const { return value.value(); }
};

// --- entanglement --------------------------------------------------------

/// S(rho^X) of a pure state; throws ValidationError if Tr[rho^2] < 1 - 1e-9.
double entanglement_entropy(const DensityMatrix& pure_state, const Subsystems& party);

/// Wootters concurrence of a two-qubit state.
double concurrence_2q(const DensityMatrix& state);
/// h(1/2 + sqrt(1 - C^2)/2).
double eof_from_concurrence(double c);
double eof_2q(const DensityMatrix& state);

struct NegativityResult {
  double log_negativity = 0.0;
  bool ppt = true;
  double min_eigenvalue = 0.0;  // of the partial transpose
};

/// Partial transpose taken on the complement of `party`.
NegativityResult negativity_ppt(const DensityMatrix& state, const Subsystems& party);
NegativityResult negativity_ppt(const DensityMatrix& state);

/// Upper bound on the relative entropy of entanglement across party|rest,
/// minimizing S(rho||sigma) over sigma = sum_i q_i |a_i><a_i| (x) |b_i><b_i|
/// with at most (d_X d_Y)^2 terms. Total dimension must be <= 16.
MeasureResult ree_upper(const DensityMatrix& state, const Subsystems& party, const OptimizerConfig& cfg);
MeasureResult ree_upper(const DensityMatrix& state, const OptimizerConfig& cfg);

// --- discord family -------------------------------------------------------

/// J = S(rho^rest) - sum_i p_i S(rho_i^rest) for a POVM on `measured`.
double classical_information(const DensityMatrix& state, const Povm& povm, std::size_t measured);

/// Ollivier-Zurek discord: min over projective bases of I - J.
MeasureResult discord_oz(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg);
MeasureResult discord_oz(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg);

/// Henderson-Vedral classical correlations: sup of J over the projective class.
MeasureResult classical_corr(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg);
MeasureResult classical_corr(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg);

/// D = I - C (value clipped at 0 within -1e-6).
MeasureResult discord_hv(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg);
MeasureResult discord_hv(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg);

/// One-way deficit: min over bases of S(rho || dephased rho).
MeasureResult one_way_deficit(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg);
MeasureResult one_way_deficit(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg);

/// Relative entropy of quantumness for two qubits: min over both local bases.
MeasureResult rel_entropy_quantumness(const DensityMatrix& state, const OptimizerConfig& cfg);

/// Closed-form geometric discord, measured side A: (a^2 + Tr[E^T E] - k_max)/4.
double geometric_discord_2q(const DensityMatrix& state);
double geometric_discord_2q(const DensityMatrix& state, Side measured);

/// min over bases on the measured qubit of ||rho - dephased rho||_HS^2, which
/// is the squared distance to the nearest state classical on that side.
MeasureResult geometric_discord_numeric(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg);
MeasureResult geometric_discord_numeric(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg);

struct KoashiWinterCheck {
  double discord = 0.0;  // D^{B|A}(rho^AB), B measured
  double rhs = 0.0;      // E_f(rho^AC) - S(rho^AB) + S(rho^B)
  double residual = 0.0;
};

/// For a pure three-qubit state ABC.
KoashiWinterCheck koashi_winter_check(const DensityMatrix& pure_tripartite, const OptimizerConfig& cfg);

}  // namespace qcorr
