#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcorr/cli.hpp"
#include "qcorr/errors.hpp"

using namespace qcorr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qcorr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qcorr_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("measure prints the Werner geometric discord") {
  const auto path = scratch("werner05.json");
  write_state(werner(0.5), path);
  const auto r = invoke({"measure", "--in", path.string(), "--measure", "geometric-discord", "--measured", "A"});
  CHECK(r.status == 0);
  CHECK(r.out.find("0.125") != std::string::npos);
}

TEST_CASE("rsp worst case on the sigma family") {
  const auto path = scratch("sigma.json");
  fs::remove(path);
  const auto r = invoke({"rsp", "--state", path.string(), "--k", "0.2", "--t", "0.4", "--worst-case"});
  CHECK(r.status == 0);
  CHECK(r.out.find("worst_case_avg = 0.04") != std::string::npos);
  CHECK(r.out.find("2D_G = 0.04") != std::string::npos);
  CHECK(fs::exists(path));
  // second run reads back the same file
  CHECK(invoke({"rsp", "--state", path.string(), "--k", "0.2", "--t", "0.4", "--worst-case"}).status == 0);
  // a file that disagrees with --k/--t is rejected
  CHECK(invoke({"rsp", "--state", path.string(), "--k", "0.1", "--t", "0.4", "--worst-case"}).status == 3);
}

TEST_CASE("trace-0.9 state file is rejected") {
  const auto path = scratch("bad.json");
  std::ofstream(path) << R"({"dims":[2,2],"matrix":[[[0.45,0],[0,0],[0,0],[0,0]],[[0,0],[0.45,0],[0,0],[0,0]],)"
                      << R"([[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]})";
  const auto r = invoke({"measure", "--in", path.string()});
  CHECK(r.status == 3);
  CHECK(r.err.find("trace is 0.9") != std::string::npos);
}

TEST_CASE("exit statuses") {
  CHECK(invoke({"measure", "--in", scratch("missing.json").string()}).status == 3);
  CHECK(invoke({"sweep", "--family", "nope", "--grid", "0.1"}).status == 2);
  CHECK(invoke({"sweep", "--family", "werner", "--grid", ""}).status == 3);
  CHECK(invoke({"sweep", "--family", "werner", "--grid", "0.1,abc"}).status == 2);
  CHECK(invoke({"measure", "--bogus"}).status == 2);
  const auto big = scratch("big.json");
  write_state(random_mixed({2, 3, 3}, 1, 1), big);
  CHECK(invoke({"measure", "--in", big.string(), "--measure", "ree"}).status == 4);
  const auto path = scratch("werner03.json");
  write_state(werner(0.3), path);
  CHECK(invoke({"measure", "--in", path.string(), "--measure", "not-a-measure"}).status == 2);
}

TEST_CASE("Werner sweep columns") {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  grid.push_back(1.0 / 3.0);
  const auto table = cli::run_sweep("werner", grid, {}, {"geometric-discord"}, Side::A, OptimizerConfig{});
  REQUIRE(table.rows.size() == grid.size());
  CHECK(table.header == std::vector<std::string>{"p", "geometric-discord", "worst_case_avg", "two_dg", "ppt"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    CHECK(std::abs(std::stod(table.rows[i][1]) - p * p / 2.0) < 1e-12);
  }
  const auto& third = table.rows.back();
  CHECK(third[4] == "true");
  CHECK(std::abs(std::stod(third[2]) - 1.0 / 9.0) < 1e-9);
  CHECK_THROWS_AS(cli::run_sweep("werner", {}, {}, {}, Side::A, OptimizerConfig{}), ValidationError);
  CHECK_THROWS_AS(cli::run_sweep("ghz", {0.1}, {}, {}, Side::A, OptimizerConfig{}), ValidationError);
}

TEST_CASE("sweep rows are identical for serial and parallel execution") {
  OptimizerConfig serial;
  serial.execution = parallel::Execution::kSerial;
  OptimizerConfig par = serial;
  par.execution = parallel::Execution::kParallel;
  const std::vector<std::string> measures{"discord", "concurrence", "geometric-discord"};
  const auto a = cli::run_sweep("sigma", {0.1, 0.2, 0.3}, {0.1, 0.3}, measures, Side::A, serial);
  const auto b = cli::run_sweep("sigma", {0.1, 0.2, 0.3}, {0.1, 0.3}, measures, Side::A, par);
  CHECK(cli::to_csv(a) == cli::to_csv(b));
  CHECK(a.rows.size() == 6);
}

TEST_CASE("CSV output is bit-identical across runs") {
  const auto first = scratch("sweep1.csv");
  const auto second = scratch("sweep2.csv");
  const std::vector<std::string> common{"sweep", "--family", "werner", "--grid", "0,0.25,0.5,0.75,1",
                                        "--measure", "discord", "--measure", "ree", "--format", "csv",
                                        "--seed", "11"};
  auto a = common;
  a.insert(a.end(), {"--out", first.string()});
  auto b = common;
  b.insert(b.end(), {"--out", second.string()});
  REQUIRE(invoke(a).status == 0);
  REQUIRE(invoke(b).status == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(slurp(first).rfind("p,discord,ree,worst_case_avg,two_dg,ppt\n", 0) == 0);
}

TEST_CASE("text tables round to six digits") {
  cli::Table t{{"x", "y"}, {{"0.333333333333", "inf"}}};
  const auto text = cli::to_text_table(t);
  CHECK(text.find("0.333333 ") != std::string::npos);
  CHECK(text.find("inf") != std::string::npos);
  CHECK(cli::to_csv(t) == "x,y\n0.333333333333,inf\n");
}

TEST_CASE("transmit and distribute subcommands") {
  const auto pure = scratch("pure2.json");
  write_state(random_pure({2, 2}, 3), pure);
  const auto t = invoke({"transmit", "--in", pure.string(), "--format", "json"});
  CHECK(t.status == 0);
  CHECK(t.out.find("\"i_c\"") != std::string::npos);
  const auto three = scratch("prod3.json");
  write_state(tensor(werner(0.8), random_mixed({2}, 2, 5)), three);
  const auto d = invoke({"distribute", "--in", three.string(), "--format", "csv"});
  CHECK(d.status == 0);
  CHECK(d.out.rfind("e_initial,e_final,deficit,chain_residual\n", 0) == 0);
  CHECK(invoke({"distribute", "--in", pure.string()}).status == 3);
}

TEST_CASE("random generator is seeded") {
  const auto a = invoke({"random", "--dims", "2,2", "--ancilla", "2", "--seed", "5"});
  const auto b = invoke({"random", "--dims", "2,2", "--ancilla", "2", "--seed", "5"});
  const auto c = invoke({"random", "--dims", "2,2", "--ancilla", "2", "--seed", "6"});
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK_NOTHROW(state_from_json(a.out));
}
