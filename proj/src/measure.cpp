#include "qcorr/measure.hpp"

#include <cmath>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

ComplexMatrix identity_of(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return ComplexMatrix::Identity(n, n);
}

double completeness_defect(const std::vector<ComplexMatrix>& ops) {
  const auto n = ops.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& e : ops) sum.noalias() += e.adjoint() * e;
  return max_abs_diff(sum, ComplexMatrix::Identity(n, n));
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
  in_dim_ = static_cast<std::size_t>(ops_.front().cols());
  out_dim_ = static_cast<std::size_t>(ops_.front().rows());
  for (const auto& e : ops_) {
    if (static_cast<std::size_t>(e.cols()) != in_dim_ || static_cast<std::size_t>(e.rows()) != out_dim_) {
      throw DimensionError("KrausChannel: Kraus operators have inconsistent shapes");
    }
  }
  const double defect = completeness_defect(ops_);
  if (!(defect <= kCompletenessTol)) {
    throw ValidationError("KrausChannel: completeness violated by " + std::to_string(defect));
  }
}

KrausChannel KrausChannel::identity(std::size_t dim) { return KrausChannel({identity_of(dim)}); }

Povm::Povm(std::vector<ComplexMatrix> elems) : elems_(std::move(elems)) {
  if (elems_.empty()) throw ValidationError("Povm: no elements");
  const auto n = elems_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (auto& m : elems_) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("Povm: elements have inconsistent shapes");
    const auto eig = herm_eig(m);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -kNegativeClip) {
      throw ValidationError("Povm: element is not positive semidefinite");
    }
    m = hermitian_part(m);
    sum += m;
  }
  const double defect = max_abs_diff(sum, ComplexMatrix::Identity(n, n));
  if (!(defect <= kCompletenessTol)) throw ValidationError("Povm: elements sum to identity only within " + std::to_string(defect));
}

VonNeumannBasis::VonNeumannBasis(std::vector<ComplexMatrix> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ValidationError("VonNeumannBasis: no projectors");
  const auto n = projectors_.front().rows();
  if (static_cast<std::size_t>(n) != projectors_.size()) {
    throw ValidationError("VonNeumannBasis: need exactly one rank-one projector per dimension");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const auto& p = projectors_[i];
    if (p.rows() != n || p.cols() != n) throw DimensionError("VonNeumannBasis: inconsistent shapes");
    if (std::abs(p.trace().real() - 1.0) > 1e-9) throw ValidationError("VonNeumannBasis: projector is not rank one");
    for (std::size_t j = 0; j < projectors_.size(); ++j) {
      const ComplexMatrix prod = p * projectors_[j];
      const ComplexMatrix expect = (i == j) ? p : ComplexMatrix::Zero(n, n);
      if (max_abs_diff(prod, expect) > 1e-9) throw ValidationError("VonNeumannBasis: projectors are not orthogonal");
    }
    sum += p;
  }
  if (max_abs_diff(sum, ComplexMatrix::Identity(n, n)) > 1e-9) {
    throw ValidationError("VonNeumannBasis: projectors do not sum to the identity");
  }
}

VonNeumannBasis VonNeumannBasis::from_unitary(const ComplexMatrix& u) {
  std::vector<ComplexMatrix> ps;
  for (Eigen::Index k = 0; k < u.cols(); ++k) ps.push_back(u.col(k) * u.col(k).adjoint());
  return VonNeumannBasis(std::move(ps));
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& state, const Dims& out_dims) {
  if (ch.in_dim() != state.dim()) throw DimensionError("apply_channel: channel input dimension does not match state");
  Dims dims = out_dims;
  if (dims.empty()) dims = ch.in_dim() == ch.out_dim() ? state.dims() : Dims{ch.out_dim()};
  const auto n = static_cast<Eigen::Index>(ch.out_dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& e : ch.ops()) out.noalias() += e * state.matrix() * e.adjoint();
  return validate(out, dims);
}

std::vector<ComplexMatrix> local_embed(const std::vector<ComplexMatrix>& ops, std::size_t subsystem,
                                       const Dims& dims) {
  if (subsystem >= dims.size()) throw DimensionError("local_embed: subsystem out of range");
  std::vector<ComplexMatrix> out;
  out.reserve(ops.size());
  for (const auto& op : ops) {
    if (static_cast<std::size_t>(op.cols()) != dims[subsystem]) {
      throw DimensionError("local_embed: operator does not act on a space of dimension " +
                           std::to_string(dims[subsystem]));
    }
    std::vector<ComplexMatrix> factors;
    for (std::size_t k = 0; k < dims.size(); ++k) factors.push_back(k == subsystem ? op : identity_of(dims[k]));
    out.push_back(kron_all(factors));
  }
  return out;
}

KrausChannel local_embed(const KrausChannel& ch, std::size_t subsystem, const Dims& dims) {
  return KrausChannel(local_embed(ch.ops(), subsystem, dims));
}

MeasurementRecord measure_kraus(const KrausChannel& ch, const DensityMatrix& state) {
  if (ch.in_dim() != state.dim()) throw DimensionError("measure_kraus: dimension mismatch");
  const Dims dims = ch.in_dim() == ch.out_dim() ? state.dims() : Dims{ch.out_dim()};
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> posts;
  for (const auto& e : ch.ops()) {
    const ComplexMatrix unnorm = e * state.matrix() * e.adjoint();
    const double p = std::max(0.0, unnorm.trace().real());
    probs.push_back(p);
    if (p < kNullOutcome) {
      posts.emplace_back(std::nullopt);
    } else {
      posts.emplace_back(validate(unnorm / p, dims));
    }
  }
  return {Pmf(std::move(probs)), std::move(posts)};
}

MeasurementRecord measure_povm(const Povm& povm, const DensityMatrix& state) {
  if (povm.dim() != state.dim()) throw DimensionError("measure_povm: dimension mismatch");
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> posts;
  for (const auto& m : povm.elems()) {
    const double p = std::max(0.0, (m * state.matrix()).trace().real());
    probs.push_back(p);
    if (p < kNullOutcome) {
      posts.emplace_back(std::nullopt);
    } else {
      const ComplexMatrix root = matrix_sqrt(m);
      posts.emplace_back(validate(root * state.matrix() * root / p, state.dims()));
    }
  }
  return {Pmf(std::move(probs)), std::move(posts)};
}

MeasurementRecord measure_local(const Povm& povm, std::size_t subsystem, const DensityMatrix& state) {
  if (subsystem >= state.num_subsystems() || povm.dim() != state.dims()[subsystem]) {
    throw DimensionError("measure_local: POVM does not match the measured subsystem");
  }
  if (state.num_subsystems() < 2) throw DimensionError("measure_local: need at least two subsystems");
  Subsystems rest;
  Dims rest_dims;
  for (std::size_t k = 0; k < state.num_subsystems(); ++k) {
    if (k != subsystem) {
      rest.push_back(k);
      rest_dims.push_back(state.dims()[k]);
    }
  }
  const auto embedded = local_embed(povm.elems(), subsystem, state.dims());
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> posts;
  for (const auto& m : embedded) {
    const ComplexMatrix cond = partial_trace(m * state.matrix(), state.dims(), rest);
    const double p = std::max(0.0, cond.trace().real());
    probs.push_back(p);
    if (p < kNullOutcome) {
      posts.emplace_back(std::nullopt);
    } else {
      posts.emplace_back(validate(hermitian_part(cond) / p, rest_dims));
    }
  }
  return {Pmf(std::move(probs)), std::move(posts)};
}

ComplexMatrix dephase_matrix(const VonNeumannBasis& basis, std::size_t subsystem, const ComplexMatrix& m,
                             const Dims& dims) {
  if (subsystem >= dims.size() || basis.dim() != dims[subsystem]) {
    throw DimensionError("dephase: basis does not match the subsystem dimension");
  }
  const auto embedded = local_embed(basis.projectors(), subsystem, dims);
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const auto& p : embedded) out.noalias() += p * m * p;
  return out;
}

DensityMatrix dephase(const VonNeumannBasis& basis, std::size_t subsystem, const DensityMatrix& state) {
  return validate(dephase_matrix(basis, subsystem, state.matrix(), state.dims()), state.dims());
}

BlochVector bloch_direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

VonNeumannBasis qubit_basis(const BlochVector& direction) {
  const double n = direction.norm();
  if (!(n > 0.0)) throw ValidationError("qubit_basis: zero direction");
  const BlochVector u = direction / n;
  return VonNeumannBasis({bloch_operator(u), bloch_operator(-u)});
}

VonNeumannBasis qubit_basis(double theta, double phi) { return qubit_basis(bloch_direction(theta, phi)); }

KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t n_kraus, std::uint64_t seed) {
  if (in_dim == 0 || out_dim == 0 || n_kraus == 0) throw ValidationError("random_channel: dimensions must be positive");
  if (out_dim * n_kraus < in_dim) throw ValidationError("random_channel: isometry needs out_dim * n_kraus >= in_dim");
  const ComplexMatrix u = random_unitary(out_dim * n_kraus, seed);
  const ComplexMatrix v = u.leftCols(static_cast<Eigen::Index>(in_dim));
  std::vector<ComplexMatrix> ops;
  const auto out = static_cast<Eigen::Index>(out_dim);
  for (std::size_t k = 0; k < n_kraus; ++k) {
    ops.push_back(v.middleRows(static_cast<Eigen::Index>(k) * out, out));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace qcorr
