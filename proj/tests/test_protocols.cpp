#include <doctest.h>

#include <json.hpp>
#include <random>

#include "qcorr/errors.hpp"
#include "qcorr/protocols.hpp"

using namespace qcorr;

namespace {

BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  BlochVector v(g(rng), g(rng), g(rng));
  return v.normalized();
}

BlochVector orthogonal_to(const BlochVector& beta, std::mt19937_64& rng) {
  const BlochVector v = random_direction(rng);
  return (v - v.dot(beta) * beta).normalized();
}

ComplexMatrix proj(int k, int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("RSP payoff") {
  const auto singlet = two_qubit_form(werner(1.0));
  const BlochVector s(1, 0, 0);
  CHECK(rsp_payoff(singlet, -s, s) == doctest::Approx(1.0));
  CHECK(rsp_payoff(TwoQubitForm{}, s, BlochVector(0, 1, 0)) == 0.0);
  for (double p : {0.1, 0.5, 0.9}) {
    const auto f = two_qubit_form(werner(p));
    CHECK(rsp_payoff(f, s, s) == doctest::Approx(p * p).epsilon(1e-12));
    CHECK(rsp_payoff(f, -s, s) == doctest::Approx(p * p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rsp_payoff(singlet, BlochVector(2, 0, 0), s), ValidationError);
}

TEST_CASE("RSP optimal payoff") {
  std::mt19937_64 rng(3);
  for (double p : {0.2, 0.7}) {
    const auto opt = rsp_optimal_payoff(two_qubit_form(werner(p)), random_direction(rng));
    CHECK(opt.payoff_max == doctest::Approx(p * p).epsilon(1e-12));
    CHECK_FALSE(opt.degenerate);
  }
  TwoQubitForm rank1;
  rank1.corr(0, 0) = 0.5;
  const auto deg = rsp_optimal_payoff(rank1, BlochVector(0, 0, 1));
  CHECK(deg.payoff_max == 0.0);
  CHECK(deg.degenerate);
  // 10^4 sampled alphas never beat the closed-form maximum, and come close
  const auto f = two_qubit_form(random_mixed({2, 2}, 2, 12));
  const BlochVector s = random_direction(rng);
  const auto opt = rsp_optimal_payoff(f, s);
  double best = 0.0;
  for (int i = 0; i < 10000; ++i) best = std::max(best, rsp_payoff(f, random_direction(rng), s));
  CHECK(best <= opt.payoff_max + 1e-12);
  CHECK(rsp_payoff(f, opt.alpha_opt, s) == doctest::Approx(opt.payoff_max).epsilon(1e-12));
  CHECK(opt.payoff_max - best < 1e-2);
}

TEST_CASE("RSP average payoff") {
  const BlochVector z(0, 0, 1);
  for (double p : {0.0, 0.3, 1.0}) {
    CHECK(rsp_average_payoff(two_qubit_form(werner(p)), z) == doctest::Approx(p * p).epsilon(1e-12));
  }
  CHECK(rsp_average_payoff(TwoQubitForm{}, z) == 0.0);
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = two_qubit_form(random_mixed({2, 2}, 1 + seed % 4, 40 + seed));
    const BlochVector beta = random_direction(rng);
    CHECK(std::abs(rsp_average_payoff_quadrature(f, beta) - rsp_average_payoff(f, beta)) < 1e-6);
  }
}

TEST_CASE("RSP worst case") {
  CHECK(std::abs(rsp_worst_case(two_qubit_form(werner(1.0 / 3.0))).value - 1.0 / 9.0) < 1e-9);
  CHECK(std::abs(rsp_worst_case(two_qubit_form(sigma_family(0.2, 0.4))).value - 1.0 / 25.0) < 1e-9);
  TwoQubitForm d;
  d.corr.diagonal() << -0.9, 0.5, 0.2;
  const auto wc = rsp_worst_case(d);
  CHECK(wc.value == doctest::Approx(0.5 * (0.25 + 0.04)).epsilon(1e-12));
  CHECK(std::abs(std::abs(wc.beta_star.x()) - 1.0) < 1e-12);
  // worst case is the minimum of the average over beta
  std::mt19937_64 rng(8);
  const auto f = two_qubit_form(random_mixed({2, 2}, 3, 77));
  const auto w = rsp_worst_case(f);
  CHECK(rsp_average_payoff(f, w.beta_star) == doctest::Approx(w.value).epsilon(1e-12));
  for (int i = 0; i < 200; ++i) CHECK(rsp_average_payoff(f, random_direction(rng)) >= w.value - 1e-12);
}

TEST_CASE("RSP discord bound") {
  for (double p : {0.1, 1.0 / 3.0, 0.8}) {
    const auto c = rsp_discord_bound_check(werner(p));
    CHECK(c.condition_met);
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(p * p).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(p * p).epsilon(1e-12));
  }
  const auto s = rsp_discord_bound_check(sigma_family(0.2, 0.4));
  CHECK(s.condition_met);
  CHECK(std::abs(s.lhs - 0.04) < 1e-9);
  CHECK(std::abs(s.rhs - 0.04) < 1e-9);
  const auto r = rsp_discord_bound_check(random_mixed({2, 2}, 2, 5));
  CHECK_FALSE(r.condition_met);
  CHECK(r.note == "condition not met");
}

TEST_CASE("rotation by pi") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const BlochVector beta = random_direction(rng);
    const RealMatrix3 r = rotation_pi(3.0 * beta);
    const BlochVector x = random_direction(rng);
    const BlochVector s = orthogonal_to(beta, rng);
    CHECK(std::abs((r * x).dot(s) + x.dot(s)) < 1e-12);
    CHECK((r * beta - beta).norm() < 1e-12);
  }
  CHECK_THROWS_AS(rotation_pi(BlochVector::Zero()), ValidationError);
}

TEST_CASE("RSP simulation") {
  const BlochVector z(0, 0, 1);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    const BlochVector s = orthogonal_to(z, rng);
    const auto rep = rsp_simulate(werner(1.0), s, z);
    CHECK((rep.final_bloch - s).norm() < 1e-12);
    CHECK(rep.payoff == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(rsp_simulate(werner(0.5), BlochVector(1, 0, 0), z).payoff == doctest::Approx(0.25).epsilon(1e-12));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rho = random_mixed({2, 2}, 1 + seed % 4, 900 + seed);
    const BlochVector beta = random_direction(rng);
    const BlochVector s = orthogonal_to(beta, rng);
    const auto rep = rsp_simulate(rho, s, beta);
    const double expect = rsp_payoff(two_qubit_form(rho), rep.alpha_opt, s);
    CHECK(std::abs(rep.payoff - expect) < 1e-9);
    CHECK(rep.payoff <= rep.payoff_max + 1e-12);
    CHECK(rep.worst_case_avg <= rep.avg_payoff + 1e-12);
  }

  const auto sampled = rsp_simulate(sigma_family(0.2, 0.4), BlochVector(1, 0, 0), z, 100000, 7);
  REQUIRE(sampled.sampled_overlap.has_value());
  const double overlap = sampled.final_bloch.dot(sampled.target_s);
  CHECK(std::abs(*sampled.sampled_overlap - overlap) <= 3.0 * *sampled.sampled_overlap_stderr);

  CHECK_THROWS_AS(rsp_simulate(werner(0.5), BlochVector(0, 0, 1), z), ValidationError);
  CHECK_THROWS_AS(rsp_simulate(werner(0.5), BlochVector(1, 0, 0), BlochVector::Zero()), ValidationError);
}

TEST_CASE("chain identity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_mixed({2, 2, 2}, 1 + seed % 8, 100 + seed);
    const auto sigma = random_mixed({2, 2, 2}, 8, 200 + seed);
    const auto basis = VonNeumannBasis::from_unitary(random_unitary(2, 300 + seed));
    const auto c = dist_chain_identity(rho, sigma, basis);
    CHECK(c.residual < 1e-9);
    REQUIRE(c.trace_residual_sigma.has_value());
    REQUIRE(c.trace_residual_rho.has_value());
    CHECK(*c.trace_residual_sigma < 1e-9);
    CHECK(*c.trace_residual_rho < 1e-9);
  }
  // sigma already dephased: first term equals the dephasing term, the gap is zero
  const auto rho = random_mixed({2, 2, 2}, 4, 5);
  const auto basis = qubit_basis(0.4, 1.0);
  const auto c = dist_chain_identity(rho, dephase(basis, 2, rho), basis);
  CHECK(c.dephased_gap.value() < 1e-12);
  CHECK(std::abs(c.total.value() - c.to_dephased.value()) < 1e-9);
  // disjoint supports
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  m(7, 7) = 1.0;
  const auto inf = dist_chain_identity(validate(kron(kron(proj(0, 2), proj(0, 2)), proj(0, 2)), {2, 2, 2}),
                                       validate(m, {2, 2, 2}), qubit_basis(0.0, 0.0));
  CHECK(inf.total.is_infinite());
  CHECK(inf.residual == 0.0);
  CHECK_FALSE(inf.trace_residual_sigma.has_value());
  CHECK_THROWS_AS(dist_chain_identity(rho, random_mixed({2, 4}, 2, 1), basis), DimensionError);
}

TEST_CASE("entanglement distribution report") {
  OptimizerConfig cfg;
  // C uncorrelated with AB
  const auto prod = tensor(werner(0.8), random_mixed({2}, 2, 3));
  const auto r = dist_inequality_check(prod, cfg);
  CHECK(r.deficit < 1e-6);
  CHECK(r.zero_deficit_case);
  CHECK(r.hard_check_passed);
  CHECK(std::abs(r.e_final - r.e_initial) < 2e-3);
  CHECK(r.chain_residual < 1e-9);

  // C classical relative to AB: sum_i p_i rho_i^AB (x) |i><i|
  const ComplexMatrix cq = 0.4 * kron(werner(0.9).matrix(), proj(0, 2)) + 0.6 * kron(random_mixed({2, 2}, 2, 8).matrix(), proj(1, 2));
  const auto rc = dist_inequality_check(validate(cq, {2, 2, 2}), cfg);
  CHECK(rc.zero_deficit_case);
  CHECK(rc.hard_check_passed);
  CHECK(rc.chain_residual < 1e-9);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto rep = dist_inequality_check(random_pure({2, 2, 2}, 40 + seed), cfg);
    CHECK(rep.deficit >= 0.0);
    CHECK(rep.soft_check_passed);
    CHECK(rep.chain_residual < 1e-9);
  }
  CHECK_THROWS_AS(dist_inequality_check(werner(0.5), cfg), DimensionError);
}

TEST_CASE("transmission tau identity") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_mixed({2, 2}, 1 + seed % 4, 60 + seed);
    const auto basis = VonNeumannBasis::from_unitary(random_unitary(2, 70 + seed));
    CHECK(transmission_identity_residual(rho, basis.as_povm(), 1) < 1e-9);
    CHECK(transmission_identity_residual(rho, basis.as_povm(), 0, 5) < 1e-9);
  }
  // a three-outcome POVM
  const double w = 2.0 / 3.0;
  std::vector<ComplexMatrix> trine;
  for (int k = 0; k < 3; ++k) trine.push_back(w * bloch_operator(bloch_direction(M_PI / 2.0, 2.0 * M_PI * k / 3.0)));
  const auto tau = transmission_tau(werner(0.7), Povm(trine), 1);
  CHECK(tau.dims() == Dims{2, 3});
  CHECK(transmission_identity_residual(werner(0.7), Povm(trine), 1) < 1e-9);
}

TEST_CASE("transmission of correlations") {
  OptimizerConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = random_pure({2, 2}, 10 + seed);
    const auto rep = transmission_ic(psi, Side::B, cfg);
    CHECK(std::abs(rep.i_c - von_neumann(reduced(psi, {0}))) < 1e-3);
    CHECK(rep.tau_identity_residual < 1e-9);
    CHECK(rep.protocol_i_ac <= rep.i_c + 1e-6);
  }
  // quantum-classical: ideal transmission
  const ComplexMatrix qc = 0.3 * kron(random_mixed({2}, 2, 1).matrix(), proj(0, 2)) +
                           0.7 * kron(random_mixed({2}, 2, 2).matrix(), proj(1, 2));
  const auto state = validate(qc, {2, 2});
  const auto rep = transmission_ic(state, Side::B, cfg);
  CHECK(std::abs(rep.i_c - mutual_information(state)) < 1e-9);
  CHECK(rep.discord < 1e-9);
  // the final state is measure-and-prepare, hence PPT
  const auto tau = transmission_tau(werner(1.0), qubit_basis(0.0, 0.0).as_povm(), 1);
  CHECK(negativity_ppt(tau).ppt);
}

TEST_CASE("quantum transmission bounds") {
  const auto indep = tensor(random_mixed({2}, 2, 1), random_mixed({2, 2}, 3, 2));
  const auto b = quantum_transmission_bounds(indep);
  CHECK(b.avg_mi == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.bound_holds);
  // classical bit broadcast to C1 and C2
  ComplexMatrix bc = ComplexMatrix::Zero(8, 8);
  bc(0, 0) = bc(7, 7) = 0.5;
  const auto br = quantum_transmission_bounds(validate(bc, {2, 2, 2}));
  CHECK(br.avg_mi == doctest::Approx(1.0));
  CHECK(br.bound == doctest::Approx(1.0));
  CHECK(br.lemma_holds);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dims dims = seed % 2 ? Dims{2, 2, 2} : Dims{2, 2, 2, 2};
    const auto r = quantum_transmission_bounds(random_mixed(dims, 1 + seed % 5, 500 + seed));
    CHECK(r.lemma_holds);
    CHECK(r.bound_holds);
  }
  CHECK_THROWS_AS(quantum_transmission_bounds(werner(0.5)), DimensionError);
}

TEST_CASE("report serialization") {
  const auto rep = rsp_simulate(werner(0.5), BlochVector(1, 0, 0), BlochVector(0, 0, 1));
  const auto j = nlohmann::json::parse(to_json(rep));
  for (const char* key : {"target_s", "axis_beta", "alpha_opt", "payoff", "payoff_max", "avg_payoff",
                          "worst_case_avg", "geom_discord"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["payoff"].get<double>() == doctest::Approx(0.25));
  CHECK(csv_header(rep).size() == csv_row(rep).size());
  DistributionReport d;
  d.chain_residual = INFINITY;
  CHECK(csv_row(d)[3] == "inf");
  CHECK(nlohmann::json::parse(to_json(d))["chain_residual"] == "inf");
  TransmissionReport t;
  const auto tj = nlohmann::json::parse(to_json(t));
  for (const char* key : {"mutual_initial", "discord", "i_c", "protocol_i_ac", "tau_identity_residual"}) {
    CHECK(tj.contains(key));
  }
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}
