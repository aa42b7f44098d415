// Seeded random search for a channel that increases the Hilbert-Schmidt
// distance between two states. Writes the first witness found as JSON.
//
//   find_hs_witness <out.json> [first_seed]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "qcorr/infotheory.hpp"
#include "qcorr/measure.hpp"

using namespace qcorr;

namespace {

nlohmann::json matrix_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: find_hs_witness <out.json> [first_seed]\n";
    return 2;
  }
  const std::uint64_t first = argc > 2 ? std::stoull(argv[2]) : 1;
  for (std::uint64_t seed = first; seed < first + 100000; ++seed) {
    const auto ch = random_channel(4, 2, 2, seed);
    const auto rho = random_mixed({4}, 2, seed + 1000003);
    const auto sigma = random_mixed({4}, 2, seed + 2000003);
    const double before = hs_distance(rho, sigma);
    const double after = hs_distance(apply_channel(ch, rho, {2}), apply_channel(ch, sigma, {2}));
    if (after <= before + 1e-3) continue;
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["rho"] = nlohmann::json::parse(state_to_json(rho));
    doc["sigma"] = nlohmann::json::parse(state_to_json(sigma));
    doc["out_dims"] = {2};
    doc["kraus"] = nlohmann::json::array();
    for (const auto& k : ch.ops()) doc["kraus"].push_back(matrix_json(k));
    doc["hs_before"] = before;
    doc["hs_after"] = after;
    std::ofstream(argv[1]) << doc.dump(1) << "\n";
    std::printf("seed %llu: %.6f -> %.6f\n", static_cast<unsigned long long>(seed), before, after);
    return 0;
  }
  std::cerr << "no witness found\n";
  return 1;
}
