#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/linop.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;

namespace {

ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  const ComplexMatrix m = random_matrix(n, seed);
  return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("kron of Pauli matrices") {
  const ComplexMatrix zz = kron(pauli::z(), pauli::z());
  CHECK(zz.rows() == 4);
  CHECK(zz(0, 0) == Complex(1.0));
  CHECK(zz(1, 1) == Complex(-1.0));
  CHECK(zz(2, 2) == Complex(-1.0));
  CHECK(zz(3, 3) == Complex(1.0));
  const ComplexMatrix xi = kron(pauli::x(), pauli::identity());
  CHECK(xi(0, 2) == Complex(1.0));
  CHECK(xi(1, 3) == Complex(1.0));
  CHECK(max_abs_diff(kron_all({pauli::x(), pauli::y(), pauli::z()}),
                     kron(kron(pauli::x(), pauli::y()), pauli::z())) == 0.0);
}

TEST_CASE("partial trace agrees with index summation") {
  const std::vector<Dims> shapes{{2, 2}, {2, 3}, {3, 2}, {2, 2, 2}, {2, 3, 2}};
  std::uint64_t seed = 1;
  for (const auto& dims : shapes) {
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    const ComplexMatrix m = random_matrix(n, seed++);
    std::vector<Subsystems> keeps;
    for (std::size_t mask = 1; mask + 1 < (1u << dims.size()); ++mask) {
      Subsystems keep;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (mask & (1u << k)) keep.push_back(k);
      keeps.push_back(keep);
    }
    for (const auto& keep : keeps) {
      CAPTURE(keep.size());
      CHECK(max_abs_diff(partial_trace(m, dims, keep), oracle::partial_trace_by_sum(m, dims, keep)) < 1e-12);
    }
  }
}

TEST_CASE("partial trace of a product is the factor") {
  const ComplexMatrix a = random_hermitian(2, 3);
  const ComplexMatrix b = random_hermitian(3, 4);
  const ComplexMatrix ab = kron(a, b);
  CHECK(max_abs_diff(partial_trace(ab, {2, 3}, {0}), a * b.trace()) < 1e-12);
  CHECK(max_abs_diff(partial_trace(ab, {2, 3}, {1}), b * a.trace()) < 1e-12);
}

TEST_CASE("partial trace rejects bad subsystem lists") {
  const ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {2}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, {2, 3}, {0}), DimensionError);
}

TEST_CASE("partial transpose of the singlet has eigenvalue -1/2") {
  const ComplexVector s = singlet_vector();
  const ComplexMatrix pt = partial_transpose(s * s.adjoint(), {2, 2}, 1);
  const auto ev = oracle::jacobi_eigenvalues(pt);
  CHECK(ev[0] == doctest::Approx(-0.5).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(ev[i] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("partial transpose twice is the identity map") {
  const ComplexMatrix m = random_matrix(12, 9);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(max_abs_diff(partial_transpose(partial_transpose(m, {2, 3, 2}, k), {2, 3, 2}, k), m) == 0.0);
  }
}

TEST_CASE("permute_subsystems swaps tensor factors") {
  const ComplexMatrix a = random_hermitian(2, 11);
  const ComplexMatrix b = random_hermitian(3, 12);
  const ComplexMatrix c = random_hermitian(2, 13);
  const ComplexMatrix abc = kron_all({a, b, c});
  CHECK(max_abs_diff(permute_subsystems(abc, {2, 3, 2}, {2, 0, 1}), kron_all({c, a, b})) < 1e-12);
  CHECK(permute_dims({2, 3, 4}, {2, 0, 1}) == Dims{4, 2, 3});
  CHECK_THROWS_AS(permute_subsystems(abc, {2, 3, 2}, {0, 0, 1}), DimensionError);
}

TEST_CASE("herm_eig matches the Jacobi oracle") {
  for (std::uint64_t seed = 20; seed < 40; ++seed) {
    const auto n = static_cast<Eigen::Index>(2 + seed % 7);
    const ComplexMatrix h = random_hermitian(n, seed);
    const auto eig = herm_eig(h);
    const auto ref = oracle::jacobi_eigenvalues(h);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(eig.eigenvalues(i) == doctest::Approx(ref[static_cast<std::size_t>(n - 1 - i)]).epsilon(1e-10));
    }
    const ComplexMatrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    CHECK(max_abs_diff(rebuilt, h) < 1e-10);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(m), DimensionError);
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("matrix functions") {
  const ComplexMatrix h = random_hermitian(4, 50);
  const ComplexMatrix psd = h * h;
  const ComplexMatrix r = matrix_sqrt(psd);
  CHECK(max_abs_diff(r * r, psd) < 1e-10);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 0.25;
  const ComplexMatrix l = matrix_log2(d);
  CHECK(l(0, 0).real() == doctest::Approx(2.0));
  CHECK(l(1, 1).real() == doctest::Approx(-2.0));
}

TEST_CASE("norms and inner products") {
  CHECK(trace_norm(pauli::z()) == doctest::Approx(2.0));
  CHECK(hs_norm(pauli::x()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(hs_inner(pauli::x(), pauli::y())) < 1e-15);
  CHECK(hs_inner(pauli::y(), pauli::y()).real() == doctest::Approx(2.0));
  const ComplexMatrix h = random_hermitian(5, 51);
  const auto ev = oracle::jacobi_eigenvalues(h);
  double sum_abs = 0.0;
  for (double v : ev) sum_abs += std::abs(v);
  CHECK(trace_norm(h) == doctest::Approx(sum_abs).epsilon(1e-10));
}

TEST_CASE("Pauli algebra") {
  const ComplexMatrix xy = pauli::x() * pauli::y();
  CHECK(max_abs_diff(xy, Complex(0, 1) * pauli::z()) < 1e-15);
  for (int k = 0; k < 3; ++k) {
    CHECK(max_abs_diff(pauli::by_index(k) * pauli::by_index(k), pauli::identity()) < 1e-15);
  }
}
