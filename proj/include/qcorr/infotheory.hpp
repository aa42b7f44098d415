#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcorr/states.hpp"

namespace qcorr {

/// A nonnegative information quantity in bits that may be +infinity. The
/// infinite case is a tag, never an IEEE inf flowing through arithmetic.
class Bits {
 public:
  static Bits finite(double v) { return Bits(v, false); }
  static Bits infinity() { return Bits(0.0, true); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Throws if infinite.
  double value() const;
  /// "inf" or the number with the requested significant digits.
  std::string to_string(int significant_digits = 12) const;

 private:
  Bits(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Probability mass function; entries >= -1e-12 (clipped to 0), sum 1 within 1e-9.
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs);
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

/// Joint pmf over an (x, y) grid, row index x.
struct JointPmf {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Pmf probs;  // row-major nx * ny
};

double shannon(const Pmf& p);
/// H(X|Y) = sum_y p_y H(X|y).
double shannon_conditional(const JointPmf& joint);
/// H(X,Y) - H(Y), the Bayes-rule form.
double shannon_joint_minus_marginal(const JointPmf& joint);

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy(double x);

/// -sum lambda log2 lambda over the clipped spectrum.
double von_neumann(const DensityMatrix& state);
/// Same, straight from a Hermitian PSD (unit trace) matrix.
double entropy_of(const ComplexMatrix& m);

/// I(X:Y) for the bipartition `party_x` versus every other subsystem.
double mutual_information(const DensityMatrix& state, const Subsystems& party_x);
/// Two-subsystem shorthand: I(A:B).
double mutual_information(const DensityMatrix& state);

/// Weight of rho outside sigma's support is "outside" when > 1e-10.
inline constexpr double kSupportTol = 1e-10;

/// S(rho||sigma) = Tr[rho log2 rho] - Tr[rho log2 sigma], +infinity when the
/// support condition fails.
Bits relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
Bits relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Tr[rho log2 sigma] over sigma's support; nullopt when rho has weight
/// > kSupportTol outside that support (the trace is then -infinity).
std::optional<double> trace_rho_log2_sigma(const ComplexMatrix& rho, const ComplexMatrix& sigma);

enum class DistanceKind { kTrace, kBures, kHilbertSchmidt };

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// 2 (1 - sqrt F).
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double distance(DistanceKind kind, const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qcorr
