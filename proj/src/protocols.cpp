#include "qcorr/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kUnitTol = 1e-9;

void require_unit(const BlochVector& v, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTol) {
    throw ValidationError(std::string(what) + " must be a unit vector (norm " + std::to_string(v.norm()) + ")");
  }
}

void require_two_qubits(const DensityMatrix& state, const char* op) {
  if (state.dims() != Dims{2, 2}) throw DimensionError(std::string(op) + ": state must have dims (2,2)");
}

// Orthonormal pair spanning the plane orthogonal to unit `beta`.
std::pair<BlochVector, BlochVector> orthogonal_plane(const BlochVector& beta) {
  BlochVector helper = std::abs(beta.x()) < 0.9 ? BlochVector::UnitX() : BlochVector::UnitY();
  BlochVector u = (helper - helper.dot(beta) * beta).normalized();
  return {u, beta.cross(u)};
}

}  // namespace

// --- remote state preparation ---------------------------------------------

double rsp_payoff(const TwoQubitForm& form, const BlochVector& alpha, const BlochVector& s) {
  require_unit(alpha, "alpha");
  require_unit(s, "s");
  const double overlap = alpha.dot(form.corr * s);
  return overlap * overlap;
}

OptimalPayoff rsp_optimal_payoff(const TwoQubitForm& form, const BlochVector& s) {
  require_unit(s, "s");
  const BlochVector es = form.corr * s;
  OptimalPayoff out;
  out.payoff_max = es.squaredNorm();
  if (es.norm() < 1e-12) {
    out.degenerate = true;
    out.alpha_opt = s;
  } else {
    out.alpha_opt = es.normalized();
  }
  return out;
}

double rsp_average_payoff(const TwoQubitForm& form, const BlochVector& beta) {
  require_unit(beta, "beta");
  const double total = (form.corr.transpose() * form.corr).trace();
  return 0.5 * total - 0.5 * (form.corr * beta).squaredNorm();
}

double rsp_average_payoff_quadrature(const TwoQubitForm& form, const BlochVector& beta, std::size_t points) {
  require_unit(beta, "beta");
  if (points == 0) throw ValidationError("quadrature needs at least one point");
  const auto [u, v] = orthogonal_plane(beta);
  double acc = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(points);
    const BlochVector s = std::cos(phi) * u + std::sin(phi) * v;
    acc += rsp_optimal_payoff(form, s.normalized()).payoff_max;
  }
  return acc / static_cast<double>(points);
}

WorstCase rsp_worst_case(const TwoQubitForm& form) {
  Eigen::SelfAdjointEigenSolver<RealMatrix3> eig(form.corr.transpose() * form.corr);
  const auto& l = eig.eigenvalues();  // ascending
  WorstCase out;
  out.value = 0.5 * (l(0) + l(1));
  out.beta_star = eig.eigenvectors().col(2);
  return out;
}

DiscordBoundCheck rsp_discord_bound_check(const DensityMatrix& state) {
  require_two_qubits(state, "rsp_discord_bound_check");
  const auto form = two_qubit_form(state);
  DiscordBoundCheck out;
  out.lhs = rsp_worst_case(form).value;
  out.rhs = 2.0 * geometric_discord_2q(state);

  const RealMatrix3 eet = form.corr * form.corr.transpose();
  const double a_norm = form.a.norm();
  if (a_norm <= 1e-6) {
    out.condition_met = true;
  } else {
    Eigen::SelfAdjointEigenSolver<RealMatrix3> eig(eet);
    const double top = eig.eigenvalues()(2);
    const BlochVector a_hat = form.a / a_norm;
    // a lies in the top eigenspace (handles degenerate E E^T as well)
    out.condition_met = (eet * a_hat - top * a_hat).norm() <= 1e-6;
  }
  if (out.condition_met) {
    out.holds = out.lhs >= out.rhs - 1e-9;
    out.note = out.holds ? "bound holds" : "bound violated";
  } else {
    out.holds = false;
    out.note = "condition not met";
  }
  return out;
}

RealMatrix3 rotation_pi(const BlochVector& beta) {
  const double n = beta.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("rotation axis beta must be nonzero");
  const BlochVector u = beta / n;
  // Rodrigues at angle pi: I + sin(pi) K + (1 - cos(pi)) K^2 = 2 u u^T - I
  return 2.0 * u * u.transpose() - RealMatrix3::Identity();
}

RspReport rsp_simulate(const DensityMatrix& state, const BlochVector& s, const BlochVector& beta, std::size_t trials,
                       std::uint64_t seed) {
  require_two_qubits(state, "rsp_simulate");
  require_unit(s, "s");
  const RealMatrix3 rot = rotation_pi(beta);
  const BlochVector beta_unit = beta.normalized();
  if (std::abs(s.dot(beta_unit)) > kUnitTol) throw ValidationError("rsp_simulate: s must be orthogonal to beta");

  const auto form = two_qubit_form(state);
  const auto opt = rsp_optimal_payoff(form, s);

  RspReport out;
  out.target_s = s;
  out.axis_beta = beta_unit;
  out.alpha_opt = opt.alpha_opt;
  out.payoff_max = opt.payoff_max;
  out.avg_payoff = rsp_average_payoff(form, beta_unit);
  out.worst_case_avg = rsp_worst_case(form).value;
  out.geom_discord = geometric_discord_2q(state);

  const auto record = measure_local(qubit_basis(opt.alpha_opt).as_povm(), 0, state);
  std::vector<BlochVector> bob(2, BlochVector::Zero());
  BlochVector r = BlochVector::Zero();
  for (std::size_t i = 0; i < 2; ++i) {
    if (!record.post_states[i]) continue;
    bob[i] = bloch_vector(record.post_states[i]->matrix());
    if (i == 1) bob[i] = rot * bob[i];
    r += record.probs.probs()[i] * bob[i];
  }
  out.final_bloch = r;
  out.payoff = r.dot(s) * r.dot(s);

  if (trials > 0) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> alice(record.probs.probs().begin(), record.probs.probs().end());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const int k = alice(rng);
      std::bernoulli_distribution up(0.5 * (1.0 + std::clamp(bob[k].dot(s), -1.0, 1.0)));
      const double x = up(rng) ? 1.0 : -1.0;
      sum += x;
      sum_sq += x * x;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 1.0;
    out.sampled_overlap = mean;
    out.sampled_overlap_stderr = std::sqrt(var / n);
    out.sampled_payoff = mean * mean;
  }
  return out;
}

// --- entanglement distribution ---------------------------------------------

ChainIdentity dist_chain_identity(const DensityMatrix& state, const DensityMatrix& sep_state,
                                  const VonNeumannBasis& basis, std::size_t subsystem) {
  if (state.dims() != sep_state.dims()) throw DimensionError("dist_chain_identity: state dims differ");
  if (subsystem >= state.num_subsystems() || basis.dim() != state.dims()[subsystem]) {
    throw DimensionError("dist_chain_identity: basis does not match the dephased subsystem");
  }
  const DensityMatrix rho_d = dephase(basis, subsystem, state);
  const DensityMatrix sigma_d = dephase(basis, subsystem, sep_state);

  ChainIdentity out;
  out.total = relative_entropy(state, sigma_d);
  out.to_dephased = relative_entropy(state, rho_d);
  out.dephased_gap = relative_entropy(rho_d, sigma_d);
  const bool right_infinite = out.to_dephased.is_infinite() || out.dephased_gap.is_infinite();
  if (out.total.is_infinite() || right_infinite) {
    out.residual = out.total.is_infinite() == right_infinite ? 0.0 : INFINITY;
  } else {
    out.residual = std::abs(out.total.value() - out.to_dephased.value() - out.dephased_gap.value());
  }

  const auto a = trace_rho_log2_sigma(state.matrix(), sigma_d.matrix());
  const auto b = trace_rho_log2_sigma(rho_d.matrix(), sigma_d.matrix());
  if (a && b) out.trace_residual_sigma = std::abs(*a - *b);
  const auto c = trace_rho_log2_sigma(state.matrix(), rho_d.matrix());
  const auto d = trace_rho_log2_sigma(rho_d.matrix(), rho_d.matrix());
  if (c && d) out.trace_residual_rho = std::abs(*c - *d);
  return out;
}

namespace {

// sum_i q_i |a_i><a_i| (x) |b_i><b_i| over (X, Y).
ComplexMatrix decomposition_matrix(const std::vector<ProductTerm>& terms) {
  const auto da = terms.front().a.size();
  const auto db = terms.front().b.size();
  ComplexMatrix out = ComplexMatrix::Zero(da * db, da * db);
  for (const auto& t : terms) out += t.weight * kron(t.a * t.a.adjoint(), t.b * t.b.adjoint());
  return out;
}

}  // namespace

DistributionReport dist_inequality_check(const DensityMatrix& state, const OptimizerConfig& cfg) {
  if (state.dims() != Dims{2, 2, 2}) throw DimensionError("dist_inequality_check: expected a three-qubit state");
  DistributionReport out;
  const auto deficit = one_way_deficit(state, 2, cfg);
  const auto initial = ree_upper(state, {0, 2}, cfg);
  const auto final_cut = ree_upper(state, {0}, cfg);
  out.deficit = deficit.bits();
  out.e_initial = initial.bits();
  out.e_final = final_cut.bits();

  // Chain identity at the separable state found for AC|B, dephased on C.
  ComplexMatrix sigma_acb = decomposition_matrix(initial.decomposition);
  sigma_acb /= sigma_acb.trace().real();
  const ComplexMatrix sigma = permute_subsystems(sigma_acb, {2, 2, 2}, {0, 2, 1});
  const auto chain = dist_chain_identity(state, validate(hermitian_part(sigma), {2, 2, 2}),
                                         qubit_basis(deficit.angles[0], deficit.angles[1]), 2);
  out.chain_residual = chain.residual;

  out.zero_deficit_case = out.deficit < 1e-6;
  if (out.zero_deficit_case) out.hard_check_passed = std::abs(out.e_final - out.e_initial) < 2e-3;
  out.soft_slack = out.e_final - out.e_initial - out.deficit;
  out.soft_check_passed = out.soft_slack <= 5e-3;
  return out;
}

// --- transmission of correlations --------------------------------------------

DensityMatrix transmission_tau(const DensityMatrix& state, const Povm& povm, std::size_t measured,
                               std::size_t charlie_dim) {
  if (measured >= state.num_subsystems() || povm.dim() != state.dims()[measured]) {
    throw DimensionError("transmission_tau: POVM does not match the measured subsystem");
  }
  if (state.num_subsystems() < 2) throw DimensionError("transmission_tau: need at least two subsystems");
  Subsystems rest;
  Dims dims;
  for (std::size_t k = 0; k < state.num_subsystems(); ++k) {
    if (k == measured) continue;
    rest.push_back(k);
    dims.push_back(state.dims()[k]);
  }
  const std::size_t dc = std::max(povm.size(), charlie_dim);
  dims.push_back(dc);
  const auto embedded = local_embed(povm.elems(), measured, state.dims());
  const auto d_rest = static_cast<Eigen::Index>(total_dim(Dims(dims.begin(), dims.end() - 1)));
  ComplexMatrix tau = ComplexMatrix::Zero(d_rest * static_cast<Eigen::Index>(dc), d_rest * static_cast<Eigen::Index>(dc));
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    const ComplexMatrix cond = partial_trace(embedded[i] * state.matrix(), state.dims(), rest);
    ComplexMatrix flag = ComplexMatrix::Zero(static_cast<Eigen::Index>(dc), static_cast<Eigen::Index>(dc));
    flag(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    tau += kron(hermitian_part(cond), flag);
  }
  return validate(hermitian_part(tau), dims);
}

double transmission_identity_residual(const DensityMatrix& state, const Povm& povm, std::size_t measured,
                                      std::size_t charlie_dim) {
  const auto tau = transmission_tau(state, povm, measured, charlie_dim);
  const double i_tau = mutual_information(tau, {tau.num_subsystems() - 1});
  return std::abs(i_tau - classical_information(state, povm, measured));
}

TransmissionReport transmission_ic(const DensityMatrix& state, Side measured, const OptimizerConfig& cfg) {
  if (state.num_subsystems() != 2) throw DimensionError("transmission_ic: expected a bipartite state");
  const std::size_t m = subsystem_of(measured);
  TransmissionReport out;
  out.mutual_initial = mutual_information(state);
  const auto d = discord_hv(state, measured, cfg);
  out.discord = d.bits();
  out.i_c = out.mutual_initial - out.discord;
  out.angles = d.angles;

  const Povm povm = qubit_basis(d.angles[0], d.angles[1]).as_povm();
  const auto tau = transmission_tau(state, povm, m);
  out.protocol_i_ac = mutual_information(tau, {1});
  out.tau_identity_residual = std::abs(out.protocol_i_ac - classical_information(state, povm, m));
  return out;
}

QuantumTransmissionBounds quantum_transmission_bounds(const DensityMatrix& state_f) {
  const std::size_t n = state_f.num_subsystems() - 1;
  if (state_f.num_subsystems() < 3) throw DimensionError("quantum_transmission_bounds: need A and at least two C parties");
  QuantumTransmissionBounds out;
  out.bound = von_neumann(reduced(state_f, {0}));
  std::vector<double> mi(n);
  for (std::size_t i = 0; i < n; ++i) mi[i] = mutual_information(reduced(state_f, {0, i + 1}));
  double sum = 0.0;
  for (double v : mi) sum += v;
  out.avg_mi = sum / static_cast<double>(n);
  out.bound_holds = out.avg_mi <= out.bound + 1e-9;
  out.lemma_worst_slack = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.lemma_worst_slack = std::max(out.lemma_worst_slack, mi[i] + mi[j] - 2.0 * out.bound);
    }
  }
  out.lemma_holds = out.lemma_worst_slack <= 1e-9;
  return out;
}

// --- serialization ---------------------------------------------------------

std::string format_number(double v, int significant_digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

namespace {

nlohmann::json vec_json(const BlochVector& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

std::string vec_csv(const BlochVector& v) {
  return format_number(v.x()) + " " + format_number(v.y()) + " " + format_number(v.z());
}

// JSON has no infinity; use the same literal as CSV.
nlohmann::json num_json(double v) {
  if (std::isinf(v)) return format_number(v);
  return v;
}

}  // namespace

std::string to_json(const RspReport& r) {
  nlohmann::json j;
  j["target_s"] = vec_json(r.target_s);
  j["axis_beta"] = vec_json(r.axis_beta);
  j["alpha_opt"] = vec_json(r.alpha_opt);
  j["payoff"] = r.payoff;
  j["payoff_max"] = r.payoff_max;
  j["avg_payoff"] = r.avg_payoff;
  j["worst_case_avg"] = r.worst_case_avg;
  j["geom_discord"] = r.geom_discord;
  j["final_bloch"] = vec_json(r.final_bloch);
  if (r.sampled_overlap) {
    j["sampled_overlap"] = *r.sampled_overlap;
    j["sampled_overlap_stderr"] = *r.sampled_overlap_stderr;
    j["sampled_payoff"] = *r.sampled_payoff;
  }
  return j.dump(2);
}

std::string to_json(const DistributionReport& r) {
  nlohmann::json j;
  j["e_initial"] = r.e_initial;
  j["e_final"] = r.e_final;
  j["deficit"] = r.deficit;
  j["chain_residual"] = num_json(r.chain_residual);
  j["zero_deficit_case"] = r.zero_deficit_case;
  j["hard_check_passed"] = r.hard_check_passed;
  j["soft_slack"] = r.soft_slack;
  j["soft_check_passed"] = r.soft_check_passed;
  return j.dump(2);
}

std::string to_json(const TransmissionReport& r) {
  nlohmann::json j;
  j["mutual_initial"] = r.mutual_initial;
  j["discord"] = r.discord;
  j["i_c"] = r.i_c;
  j["protocol_i_ac"] = r.protocol_i_ac;
  j["tau_identity_residual"] = r.tau_identity_residual;
  j["angles"] = r.angles;
  return j.dump(2);
}

std::vector<std::string> csv_header(const RspReport&) {
  return {"target_s", "axis_beta", "alpha_opt", "payoff", "payoff_max", "avg_payoff", "worst_case_avg", "geom_discord"};
}

std::vector<std::string> csv_row(const RspReport& r) {
  return {vec_csv(r.target_s),       vec_csv(r.axis_beta),        vec_csv(r.alpha_opt),
          format_number(r.payoff),   format_number(r.payoff_max), format_number(r.avg_payoff),
          format_number(r.worst_case_avg), format_number(r.geom_discord)};
}

std::vector<std::string> csv_header(const DistributionReport&) {
  return {"e_initial", "e_final", "deficit", "chain_residual"};
}

std::vector<std::string> csv_row(const DistributionReport& r) {
  return {format_number(r.e_initial), format_number(r.e_final), format_number(r.deficit),
          format_number(r.chain_residual)};
}

std::vector<std::string> csv_header(const TransmissionReport&) {
  return {"mutual_initial", "discord", "i_c", "protocol_i_ac", "tau_identity_residual"};
}

std::vector<std::string> csv_row(const TransmissionReport& r) {
  return {format_number(r.mutual_initial), format_number(r.discord), format_number(r.i_c),
          format_number(r.protocol_i_ac), format_number(r.tau_identity_residual)};
}

}  // namespace qcorr
