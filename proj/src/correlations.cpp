#include "qcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

void require_two_qubits(const DensityMatrix& state, const char* op) {
  if (state.dims() != Dims{2, 2}) throw DimensionError(std::string(op) + ": state must have dims (2,2)");
}

Subsystems complement(const Subsystems& party, std::size_t n) {
  Subsystems rest;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::find(party.begin(), party.end(), k) == party.end()) rest.push_back(k);
  }
  return rest;
}

void require_measured_qubit(const DensityMatrix& state, std::size_t measured, const char* op) {
  if (state.num_subsystems() < 2) throw DimensionError(std::string(op) + ": need at least two subsystems");
  if (measured >= state.num_subsystems()) throw DimensionError(std::string(op) + ": measured subsystem out of range");
  if (state.dims()[measured] != 2) {
    throw UnsupportedError(std::string(op) + ": measured subsystem has dimension " +
                           std::to_string(state.dims()[measured]) + "; only qubits are supported");
  }
}

// Conditional operators Tr_m[(Pi x 1) rho] for a measured qubit m, built from
// the four 2x2-index blocks of rho with m moved to the last position.
class QubitConditional {
 public:
  QubitConditional(const DensityMatrix& state, std::size_t measured) {
    Subsystems perm = complement({measured}, state.num_subsystems());
    perm.push_back(measured);
    const ComplexMatrix moved = permute_subsystems(state.matrix(), state.dims(), perm);
    rest_ = moved.rows() / 2;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        ComplexMatrix blk(rest_, rest_);
        for (Eigen::Index r = 0; r < rest_; ++r) {
          for (Eigen::Index c = 0; c < rest_; ++c) blk(r, c) = moved(2 * r + j, 2 * c + k);
        }
        blocks_[j][k] = std::move(blk);
      }
    }
  }

  // Unnormalized conditional state for measurement operator m (2x2).
  ComplexMatrix conditional(const ComplexMatrix& m) const {
    ComplexMatrix out = ComplexMatrix::Zero(rest_, rest_);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) out += m(k, j) * blocks_[j][k];
    }
    return hermitian_part(out);
  }

  // sum_i p_i S(rho_i) for the basis along `direction`.
  double conditional_entropy(const BlochVector& direction) const {
    double acc = 0.0;
    for (double sign : {1.0, -1.0}) {
      const ComplexMatrix cond = conditional(bloch_operator(sign * direction));
      const double p = cond.trace().real();
      if (p < kNullOutcome) continue;
      acc += p * entropy_of(cond / p);
    }
    return acc;
  }

 private:
  Eigen::Index rest_ = 0;
  ComplexMatrix blocks_[2][2];
};

MeasureResult minimize_measured(const Objective& f, std::size_t n_qubits, const OptimizerConfig& cfg) {
  const auto res = minimize_over_directions(f, n_qubits, cfg);
  MeasureResult out;
  out.value = Bits::finite(res.value);
  out.angles = res.x;
  out.evaluations = res.evaluations;
  out.converged = res.converged;
  return out;
}

double clip_small_negative(double v, double tol) {
  if (v < 0.0 && v >= -tol) return 0.0;
  return v;
}

}  // namespace

// --- entanglement --------------------------------------------------------

double entanglement_entropy(const DensityMatrix& pure_state, const Subsystems& party) {
  if (purity(pure_state) < 1.0 - 1e-9) throw ValidationError("entanglement_entropy: state is not pure");
  return von_neumann(reduced(pure_state, party));
}

double concurrence_2q(const DensityMatrix& state) {
  require_two_qubits(state, "concurrence_2q");
  const ComplexMatrix yy = kron(pauli::y(), pauli::y());
  // sqrt of the eigenvalues of R rho~ R (R = sqrt rho) are the singular values of R (Y (x) Y) R*
  const ComplexMatrix root = matrix_sqrt(state.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(root * yy * root.conjugate());
  const auto& l = svd.singularValues();
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c)));
}

double eof_2q(const DensityMatrix& state) { return eof_from_concurrence(concurrence_2q(state)); }

NegativityResult negativity_ppt(const DensityMatrix& state, const Subsystems& party) {
  const Subsystems rest = complement(party, state.num_subsystems());
  if (party.empty() || rest.empty()) throw DimensionError("negativity_ppt: cut must be a proper bipartition");
  ComplexMatrix pt = state.matrix();
  for (std::size_t k : rest) pt = partial_transpose(pt, state.dims(), k);
  const auto eig = herm_eig(pt);
  NegativityResult out;
  out.min_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
  out.ppt = out.min_eigenvalue >= -1e-9;
  out.log_negativity = out.ppt ? 0.0 : std::log2(eig.eigenvalues.cwiseAbs().sum());
  return out;
}

NegativityResult negativity_ppt(const DensityMatrix& state) {
  if (state.num_subsystems() != 2) throw DimensionError("negativity_ppt: expected a bipartite state");
  return negativity_ppt(state, {0});
}

// --- discord family -------------------------------------------------------

double classical_information(const DensityMatrix& state, const Povm& povm, std::size_t measured) {
  const Subsystems rest = complement({measured}, state.num_subsystems());
  const double s_rest = von_neumann(reduced(state, rest));
  const auto record = measure_local(povm, measured, state);
  double cond = 0.0;
  for (std::size_t i = 0; i < record.post_states.size(); ++i) {
    if (record.post_states[i]) cond += record.probs.probs()[i] * von_neumann(*record.post_states[i]);
  }
  return s_rest - cond;
}

MeasureResult discord_oz(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg) {
  require_measured_qubit(state, measured, "discord_oz");
  const QubitConditional kernel(state, measured);
  const double s_m = von_neumann(reduced(state, {measured}));
  const double s_all = von_neumann(state);
  // I - J = S(m) - S(all) + sum_i p_i S(rho_i)
  auto objective = [&](const std::vector<double>& x) {
    return s_m - s_all + kernel.conditional_entropy(bloch_direction(x[0], x[1]));
  };
  auto out = minimize_measured(objective, 1, cfg);
  out.value = Bits::finite(std::max(0.0, clip_small_negative(out.value.value(), 1e-9)));
  return out;
}

MeasureResult classical_corr(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg) {
  require_measured_qubit(state, measured, "classical_corr");
  const QubitConditional kernel(state, measured);
  const double s_rest = von_neumann(reduced(state, complement({measured}, state.num_subsystems())));
  auto objective = [&](const std::vector<double>& x) {
    return kernel.conditional_entropy(bloch_direction(x[0], x[1])) - s_rest;
  };
  auto out = minimize_measured(objective, 1, cfg);
  out.value = Bits::finite(std::max(0.0, -out.value.value()));
  return out;
}

MeasureResult discord_hv(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg) {
  auto out = classical_corr(state, measured, cfg);
  const double mi = mutual_information(state, {measured});
  const double d = clip_small_negative(mi - out.value.value(), 1e-6);
  out.value = Bits::finite(std::max(0.0, d));
  return out;
}

MeasureResult one_way_deficit(const DensityMatrix& state, std::size_t measured, const OptimizerConfig& cfg) {
  require_measured_qubit(state, measured, "one_way_deficit");
  const double s_all = von_neumann(state);
  // S(rho || Pi(rho)) = S(Pi(rho)) - S(rho) for a dephasing Pi.
  auto objective = [&](const std::vector<double>& x) {
    const auto basis = qubit_basis(x[0], x[1]);
    return entropy_of(dephase_matrix(basis, measured, state.matrix(), state.dims())) - s_all;
  };
  auto out = minimize_measured(objective, 1, cfg);
  out.value = Bits::finite(std::max(0.0, out.value.value()));
  return out;
}

MeasureResult rel_entropy_quantumness(const DensityMatrix& state, const OptimizerConfig& cfg) {
  if (state.dims() != Dims{2, 2}) throw UnsupportedError("rel_entropy_quantumness: only two-qubit states are supported");
  const double s_all = von_neumann(state);
  const ComplexMatrix& rho = state.matrix();
  auto objective = [&](const std::vector<double>& x) {
    const BlochVector na = bloch_direction(x[0], x[1]);
    const BlochVector nb = bloch_direction(x[2], x[3]);
    // Doubly dephased state is diagonal in the product basis.
    double h = 0.0;
    for (double sa : {1.0, -1.0}) {
      for (double sb : {1.0, -1.0}) {
        const ComplexMatrix proj = kron(bloch_operator(sa * na), bloch_operator(sb * nb));
        const double p = (proj * rho).trace().real();
        if (p > 0.0) h -= p * std::log2(p);
      }
    }
    return h - s_all;
  };
  auto out = minimize_measured(objective, 2, cfg);
  out.value = Bits::finite(std::max(0.0, out.value.value()));
  return out;
}

double geometric_discord_2q(const DensityMatrix& state) {
  require_two_qubits(state, "geometric_discord_2q");
  const auto f = two_qubit_form(state);
  const Eigen::Matrix3d k = f.a * f.a.transpose() + f.corr * f.corr.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(k);
  const double k_max = solver.eigenvalues().maxCoeff();
  const double value = 0.25 * (f.a.squaredNorm() + (f.corr.transpose() * f.corr).trace() - k_max);
  return std::max(0.0, value);
}

double geometric_discord_2q(const DensityMatrix& state, Side measured) {
  return measured == Side::A ? geometric_discord_2q(state) : geometric_discord_2q(permute(state, {1, 0}));
}

MeasureResult geometric_discord_numeric(const DensityMatrix& state, std::size_t measured,
                                        const OptimizerConfig& cfg) {
  require_measured_qubit(state, measured, "geometric_discord_numeric");
  auto objective = [&](const std::vector<double>& x) {
    const auto basis = qubit_basis(x[0], x[1]);
    const ComplexMatrix diff = state.matrix() - dephase_matrix(basis, measured, state.matrix(), state.dims());
    return hs_inner(diff, diff).real();
  };
  auto out = minimize_measured(objective, 1, cfg);
  out.value = Bits::finite(std::max(0.0, out.value.value()));
  return out;
}

KoashiWinterCheck koashi_winter_check(const DensityMatrix& pure_tripartite, const OptimizerConfig& cfg) {
  if (pure_tripartite.dims() != Dims{2, 2, 2}) throw DimensionError("koashi_winter_check: need a three-qubit state");
  if (purity(pure_tripartite) < 1.0 - 1e-9) throw ValidationError("koashi_winter_check: state is not pure");
  const auto rho_ab = reduced(pure_tripartite, {0, 1});
  const auto rho_ac = reduced(pure_tripartite, {0, 2});
  KoashiWinterCheck out;
  out.discord = discord_hv(rho_ab, Side::B, cfg).bits();
  out.rhs = eof_2q(rho_ac) - von_neumann(rho_ab) + von_neumann(reduced(pure_tripartite, {1}));
  out.residual = std::abs(out.discord - out.rhs);
  return out;
}

// Side overloads.
MeasureResult discord_oz(const DensityMatrix& s, Side m, const OptimizerConfig& c) { return discord_oz(s, subsystem_of(m), c); }
MeasureResult classical_corr(const DensityMatrix& s, Side m, const OptimizerConfig& c) { return classical_corr(s, subsystem_of(m), c); }
MeasureResult discord_hv(const DensityMatrix& s, Side m, const OptimizerConfig& c) { return discord_hv(s, subsystem_of(m), c); }
MeasureResult one_way_deficit(const DensityMatrix& s, Side m, const OptimizerConfig& c) { return one_way_deficit(s, subsystem_of(m), c); }
MeasureResult geometric_discord_numeric(const DensityMatrix& s, Side m, const OptimizerConfig& c) {
  return geometric_discord_numeric(s, subsystem_of(m), c);
}

}  // namespace qcorr
