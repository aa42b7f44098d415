#include "qcorr/states.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ComplexVector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

DensityMatrix validate(const ComplexMatrix& m, const Dims& dims) {
  if (dims.empty()) throw DimensionError("state has no subsystems");
  for (std::size_t d : dims) {
    if (d == 0) throw DimensionError("subsystem dimension must be positive");
  }
  if (m.rows() != m.cols()) throw DimensionError("state matrix is not square");
  if (static_cast<Eigen::Index>(total_dim(dims)) != m.rows()) {
    throw DimensionError("dims product " + std::to_string(total_dim(dims)) +
                         " does not match matrix size " + std::to_string(m.rows()));
  }
  if (!all_finite(m)) throw ValidationError("state matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw ValidationError("state matrix is not Hermitian (defect " + fmt_double(defect) + ")");
  }
  ComplexMatrix h = hermitian_part(m);
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw ValidationError("state trace is " + fmt_double(trace) + ", expected 1");
  }
  const auto eig = herm_eig(h);
  const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (min_eig < -kNegativeClip) {
    throw ValidationError("state is not positive (min eigenvalue " + fmt_double(min_eig) + ")");
  }
  return DensityMatrix(dims, std::move(h));
}

DensityMatrix from_pure(const ComplexVector& amplitudes, const Dims& dims) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("from_pure: zero or non-finite vector");
  const ComplexVector psi = amplitudes / norm;
  return validate(psi * psi.adjoint(), dims);
}

DensityMatrix reduced(const DensityMatrix& state, const Subsystems& keep) {
  if (keep.empty()) throw DimensionError("reduced: keep set is empty");
  Subsystems sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  Dims kept_dims;
  for (std::size_t k : sorted) {
    if (k >= state.num_subsystems()) throw DimensionError("reduced: subsystem index out of range");
    kept_dims.push_back(state.dims()[k]);
  }
  return validate(partial_trace(state.matrix(), state.dims(), sorted), kept_dims);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return validate(kron(a.matrix(), b.matrix()), dims);
}

DensityMatrix permute(const DensityMatrix& state, const Subsystems& perm) {
  return validate(permute_subsystems(state.matrix(), state.dims(), perm), permute_dims(state.dims(), perm));
}

DensityMatrix maximally_mixed(const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(total_dim(dims));
  return validate(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims);
}

double purity(const DensityMatrix& state) { return (state.matrix() * state.matrix()).trace().real(); }

TwoQubitForm two_qubit_form(const DensityMatrix& state) {
  if (state.dims() != Dims{2, 2}) throw DimensionError("two_qubit_form: state must have dims (2,2)");
  const ComplexMatrix& rho = state.matrix();
  TwoQubitForm f;
  for (int i = 0; i < 3; ++i) {
    f.a(i) = (kron(pauli::by_index(i), pauli::identity()) * rho).trace().real();
    f.b(i) = (kron(pauli::identity(), pauli::by_index(i)) * rho).trace().real();
    for (int j = 0; j < 3; ++j) {
      f.corr(i, j) = (kron(pauli::by_index(i), pauli::by_index(j)) * rho).trace().real();
    }
  }
  return f;
}

DensityMatrix from_two_qubit_form(const TwoQubitForm& form) {
  ComplexMatrix rho = ComplexMatrix::Identity(4, 4);
  for (int i = 0; i < 3; ++i) {
    rho += form.a(i) * kron(pauli::by_index(i), pauli::identity());
    rho += form.b(i) * kron(pauli::identity(), pauli::by_index(i));
    for (int j = 0; j < 3; ++j) rho += form.corr(i, j) * kron(pauli::by_index(i), pauli::by_index(j));
  }
  rho /= 4.0;
  try {
    return validate(rho, {2, 2});
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("not a physical state: ") + e.what());
  }
}

BlochVector bloch_vector(const ComplexMatrix& qubit_op) {
  if (qubit_op.rows() != 2 || qubit_op.cols() != 2) throw DimensionError("bloch_vector: operator must be 2x2");
  BlochVector v;
  for (int k = 0; k < 3; ++k) v(k) = (pauli::by_index(k) * qubit_op).trace().real();
  return v;
}

ComplexMatrix bloch_operator(const BlochVector& v) {
  ComplexMatrix m = pauli::identity();
  for (int k = 0; k < 3; ++k) m += v(k) * pauli::by_index(k);
  return 0.5 * m;
}

ComplexVector singlet_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

ComplexVector psi_plus_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = 1.0 / std::sqrt(2.0);
  return v;
}

DensityMatrix werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("werner: p must lie in [0, 1], got " + fmt_double(p));
  const ComplexVector s = singlet_vector();
  return validate(p * (s * s.adjoint()) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0, {2, 2});
}

DensityMatrix sigma_family(double k, double t) {
  // Weights within 1e-12 of zero are boundary states (e.g. k = 1/5, t = 2/5) and are clamped.
  auto weight = [](double w) { return w < 0.0 && w >= -1e-12 ? 0.0 : w; };
  const double w_plus = weight((1.0 - k) / 4.0);
  const double w_minus = weight((1.0 + 3.0 * k) / 4.0);
  const double w_00 = weight((1.0 - 2.0 * t - k) / 4.0);
  const double w_11 = weight((1.0 + 2.0 * t - k) / 4.0);
  if (!std::isfinite(k) || !std::isfinite(t) || w_plus < 0.0 || w_minus < 0.0 || w_00 < 0.0 || w_11 < 0.0) {
    throw ValidationError("sigma_family: weights (1-k)/4, (1+3k)/4, (1-2t-k)/4, (1+2t-k)/4 must be >= 0; "
                          "need -1/3 <= k <= 1 and |2t| <= 1-k (k=" + fmt_double(k) + ", t=" + fmt_double(t) + ")");
  }
  const ComplexVector plus = psi_plus_vector();
  const ComplexVector minus = singlet_vector();
  ComplexMatrix rho = w_plus * (plus * plus.adjoint()) + w_minus * (minus * minus.adjoint());
  rho(0, 0) += w_00;
  rho(3, 3) += w_11;
  return validate(rho, {2, 2});
}

ComplexVector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexVector v = gaussian_vector(dim, rng);
  return v / v.norm();
}

DensityMatrix random_pure(const Dims& dims, std::uint64_t seed) {
  return from_pure(random_unit_vector(total_dim(dims), seed), dims);
}

DensityMatrix random_mixed(const Dims& dims, std::size_t ancilla_dim, std::uint64_t seed) {
  if (ancilla_dim == 0) throw ValidationError("random_mixed: ancilla_dim must be >= 1");
  const std::size_t n = total_dim(dims);
  const ComplexVector psi = random_unit_vector(n * ancilla_dim, seed);
  const ComplexMatrix full = psi * psi.adjoint();
  Subsystems keep(1, 0);
  return validate(partial_trace(full, {n, ancilla_dim}, keep), dims);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) g.col(j) = gaussian_vector(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

std::string state_to_json(const DensityMatrix& state) {
  std::ostringstream out;
  out << "{\"dims\":[";
  for (std::size_t k = 0; k < state.dims().size(); ++k) out << (k ? "," : "") << state.dims()[k];
  out << "],\"matrix\":[";
  const auto& m = state.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i ? "," : "") << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << "[" << fmt_double(m(i, j).real()) << "," << fmt_double(m(i, j).imag()) << "]";
    }
    out << "]";
  }
  out << "]}\n";
  return out.str();
}

DensityMatrix state_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix")) {
    throw ParseError("state file must be an object with \"dims\" and \"matrix\"");
  }
  const auto& jd = doc["dims"];
  if (!jd.is_array() || jd.empty()) throw ParseError("\"dims\" must be a nonempty array of positive integers");
  Dims dims;
  for (const auto& d : jd) {
    if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0) {
      throw ParseError("\"dims\" must be a nonempty array of positive integers");
    }
    dims.push_back(d.get<std::size_t>());
  }
  const auto& jm = doc["matrix"];
  if (!jm.is_array()) throw ParseError("\"matrix\" must be an array of rows");
  const auto n = static_cast<Eigen::Index>(jm.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = jm[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("\"matrix\" row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& e = row[static_cast<std::size_t>(j)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("matrix entries must be [re, im] pairs");
      }
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return validate(m, dims);
}

DensityMatrix read_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json(buf.str());
}

void write_state(const DensityMatrix& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write state file " + path.string());
  out << state_to_json(state);
}

}  // namespace qcorr
