#include "qcorr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qcorr/errors.hpp"
#include "qcorr/protocols.hpp"

namespace qcorr::cli {

namespace {

MeasureValue from_result(const std::string& name, const MeasureResult& r) {
  return {name, r.value, r.converged, r.evaluations};
}

MeasureValue exact(const std::string& name, double v) { return {name, Bits::finite(v), true, 0}; }

std::size_t side_index(Side s) { return subsystem_of(s); }

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_json(const std::string& cell) {
  double v = 0.0;
  if (cell == "inf") return cell;
  if (parse_number(cell, v)) return v;
  return cell;
}

nlohmann::json table_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
    rows.push_back(obj);
  }
  return rows;
}

std::string render(const Table& t, const std::string& format) {
  if (format == "csv") return to_csv(t);
  if (format == "json") return table_json(t).dump(2) + "\n";
  return to_text_table(t);
}

Table report_table(const std::vector<std::string>& header, const std::vector<std::string>& row) {
  Table t{{"quantity", "value"}, {}};
  for (std::size_t i = 0; i < header.size(); ++i) t.rows.push_back({header[i], row[i]});
  return t;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

Side parse_side(const std::string& s) { return s == "B" ? Side::B : Side::A; }

struct Common {
  std::string format = "table";
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t restarts = OptimizerConfig{}.restarts;
  double tol = OptimizerConfig{}.tol;

  OptimizerConfig config() const {
    OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.tol = tol;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format for stdout")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  sub->add_option("--out", c.out_path, "Write machine-readable output (csv, or json with --format json)");
  sub->add_option("--seed", c.seed, "Seed for optimizer restarts and sampling");
  sub->add_option("--restarts", c.restarts, "Optimizer restarts");
  sub->add_option("--tol", c.tol, "Optimizer tolerance");
}

// stdout gets `format`; --out gets csv unless json was asked for.
void emit(const Table& t, const Common& c, std::ostream& out) {
  out << render(t, c.format);
  if (!c.out_path.empty()) write_file(c.out_path, render(t, c.format == "json" ? "json" : "csv"));
}

BlochVector to_bloch(const std::vector<double>& v) { return BlochVector(v[0], v[1], v[2]); }

}  // namespace

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names{
      "entropy",         "purity",        "mutual-information", "entanglement-entropy",
      "concurrence",     "eof",           "log-negativity",     "ppt",
      "ree",             "discord-oz",    "classical-corr",     "discord",
      "one-way-deficit", "rel-entropy-quantumness", "geometric-discord", "geometric-discord-numeric"};
  return names;
}

MeasureValue compute_measure(const std::string& name, const DensityMatrix& state, Side measured,
                             const OptimizerConfig& cfg) {
  if (name == "entropy") return exact(name, von_neumann(state));
  if (name == "purity") return exact(name, purity(state));
  if (name == "mutual-information") return exact(name, mutual_information(state, {0}));
  if (name == "entanglement-entropy") return exact(name, entanglement_entropy(state, {0}));
  if (name == "concurrence") return exact(name, concurrence_2q(state));
  if (name == "eof") return exact(name, eof_2q(state));
  if (name == "log-negativity") return exact(name, negativity_ppt(state, {0}).log_negativity);
  if (name == "ppt") return exact(name, negativity_ppt(state, {0}).ppt ? 1.0 : 0.0);
  if (name == "ree") return from_result(name, ree_upper(state, {0}, cfg));
  if (name == "discord-oz") return from_result(name, discord_oz(state, side_index(measured), cfg));
  if (name == "classical-corr") return from_result(name, classical_corr(state, side_index(measured), cfg));
  if (name == "discord") return from_result(name, discord_hv(state, side_index(measured), cfg));
  if (name == "one-way-deficit") return from_result(name, one_way_deficit(state, side_index(measured), cfg));
  if (name == "rel-entropy-quantumness") return from_result(name, rel_entropy_quantumness(state, cfg));
  if (name == "geometric-discord") return exact(name, geometric_discord_2q(state, measured));
  if (name == "geometric-discord-numeric") {
    return from_result(name, geometric_discord_numeric(state, side_index(measured), cfg));
  }
  throw ValidationError("unknown measure '" + name + "'");
}

Table run_sweep(const std::string& family, const std::vector<double>& grid, const std::vector<double>& t_grid,
                const std::vector<std::string>& measures, Side measured, const OptimizerConfig& cfg) {
  if (grid.empty()) throw ValidationError("sweep: parameter grid is empty");
  if (family != "werner" && family != "sigma") throw ValidationError("sweep: unknown family '" + family + "'");
  const bool sigma = family == "sigma";
  if (sigma && t_grid.empty()) throw ValidationError("sweep: t grid is empty");

  std::vector<std::pair<double, double>> points;
  for (double x : grid) {
    if (!sigma) {
      points.emplace_back(x, 0.0);
      continue;
    }
    for (double t : t_grid) points.emplace_back(x, t);
  }

  static const std::vector<std::string> fixed{"worst_case_avg", "two_dg", "ppt"};
  std::vector<std::string> names;
  for (const auto& m : measures) {
    if (std::find(fixed.begin(), fixed.end(), m) == fixed.end()) names.push_back(m);
  }

  Table table;
  table.header = sigma ? std::vector<std::string>{"k", "t"} : std::vector<std::string>{"p"};
  table.header.insert(table.header.end(), names.begin(), names.end());
  table.header.insert(table.header.end(), fixed.begin(), fixed.end());

  OptimizerConfig inner = cfg;
  inner.execution = parallel::Execution::kSerial;
  table.rows = parallel::map<std::vector<std::string>>(cfg.execution, points.size(), [&](std::size_t i) {
    const auto [x, t] = points[i];
    const DensityMatrix state = sigma ? sigma_family(x, t) : werner(x);
    std::vector<std::string> row{format_number(x)};
    if (sigma) row.push_back(format_number(t));
    for (const auto& m : names) row.push_back(compute_measure(m, state, measured, inner).value.to_string(12));
    row.push_back(format_number(rsp_worst_case(two_qubit_form(state)).value));
    row.push_back(format_number(2.0 * geometric_discord_2q(state)));
    row.push_back(negativity_ppt(state).ppt ? "true" : "false");
    return row;
  });
  return table;
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return os.str();
}

std::string to_text_table(const Table& table) {
  auto shown = [](const std::string& cell) {
    double v = 0.0;
    if (cell != "inf" && parse_number(cell, v)) return format_number(v, 6);
    return cell;
  };
  std::vector<std::size_t> width(table.header.size(), 0);
  for (std::size_t i = 0; i < table.header.size(); ++i) width[i] = table.header[i].size();
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], shown(row[i]).size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells, bool format) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string c = format ? shown(cells[i]) : cells[i];
      os << c;
      if (i + 1 < cells.size()) os << std::string(width[i] - c.size() + 2, ' ');
    }
    os << "\n";
  };
  line(table.header, false);
  for (const auto& row : table.rows) line(row, true);
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcorr: quantum correlation measures and protocols"};
  app.require_subcommand(1);

  // measure
  Common mc;
  std::string in_path;
  std::vector<std::string> measures;
  std::string measured_name = "A";
  auto* measure = app.add_subcommand("measure", "Compute measures on a state file");
  measure->add_option("--in", in_path, "State file (JSON)")->required();
  measure->add_option("--measure", measures, "Measure name (repeatable)")->check(CLI::IsMember(measure_names()));
  measure->add_option("--measured", measured_name, "Measured side")->check(CLI::IsMember({"A", "B"}));
  add_common(measure, mc);

  // rsp
  Common rc;
  std::string rsp_state;
  double k = NAN;
  double t = NAN;
  bool worst_case = false;
  std::vector<double> s_vec{1.0, 0.0, 0.0};
  std::vector<double> beta_vec{0.0, 0.0, 1.0};
  std::size_t trials = 0;
  auto* rsp = app.add_subcommand("rsp", "Remote state preparation payoffs");
  rsp->add_option("--state", rsp_state, "State file; written from --k/--t if it does not exist");
  auto* k_opt = rsp->add_option("--k", k, "sigma-family parameter k");
  auto* t_opt = rsp->add_option("--t", t, "sigma-family parameter t");
  k_opt->needs(t_opt);
  t_opt->needs(k_opt);
  rsp->add_flag("--worst-case", worst_case, "Report min over beta of the average payoff and 2 D_G");
  rsp->add_option("--s", s_vec, "Target Bloch vector x,y,z")->delimiter(',')->expected(3);
  rsp->add_option("--beta", beta_vec, "Rotation axis x,y,z")->delimiter(',')->expected(3);
  rsp->add_option("--trials", trials, "Monte-Carlo trials (0: analytic only)");
  add_common(rsp, rc);

  // distribute
  Common dc;
  std::string dist_in;
  auto* distribute = app.add_subcommand("distribute", "Entanglement distribution check on a three-qubit state");
  distribute->add_option("--in", dist_in, "State file (JSON)")->required();
  add_common(distribute, dc);

  // transmit
  Common tc;
  std::string trans_in;
  std::string trans_side = "B";
  auto* transmit = app.add_subcommand("transmit", "Classical transmission of correlations");
  transmit->add_option("--in", trans_in, "State file (JSON)")->required();
  transmit->add_option("--measured", trans_side, "Side whose outcome is sent")->check(CLI::IsMember({"A", "B"}));
  add_common(transmit, tc);

  // sweep
  Common sc;
  std::string family = "werner";
  std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> t_grid{0.4};
  std::vector<std::string> sweep_measures;
  std::string sweep_side = "A";
  bool grid_given_empty = false;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over a state family");
  sweep->add_option("--family", family, "State family")->check(CLI::IsMember({"werner", "sigma"}));
  sweep->add_option_function<std::string>(
      "--grid",
      [&](const std::string& text) {
        grid.clear();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          double v = 0.0;
          if (item.empty()) continue;
          if (!parse_number(item, v)) throw CLI::ValidationError("--grid", "not a number: " + item);
          grid.push_back(v);
        }
        grid_given_empty = grid.empty();
      },
      "Comma-separated parameter values (p, or k for sigma)");
  sweep->add_option("--t", t_grid, "t values for the sigma family")->delimiter(',');
  sweep->add_option("--measure", sweep_measures, "Measure column (repeatable)")->check(CLI::IsMember(measure_names()));
  sweep->add_option("--measured", sweep_side, "Measured side")->check(CLI::IsMember({"A", "B"}));
  add_common(sweep, sc);

  // random
  Common gc;
  std::vector<std::size_t> dims{2, 2};
  std::size_t ancilla = 0;
  std::string gen_family = "haar";
  double param_p = 0.5;
  double param_k = 0.2;
  double param_t = 0.4;
  auto* random = app.add_subcommand("random", "Write a random or named state file");
  random->add_option("--dims", dims, "Subsystem dimensions")->delimiter(',');
  random->add_option("--ancilla", ancilla, "Purify over an ancilla of this size (0: pure state)");
  random->add_option("--family", gen_family, "haar, werner or sigma")->check(CLI::IsMember({"haar", "werner", "sigma"}));
  random->add_option("--p", param_p, "Werner parameter");
  random->add_option("--k", param_k, "sigma-family k");
  random->add_option("--t", param_t, "sigma-family t");
  add_common(random, gc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*measure) {
      const OptimizerConfig cfg = mc.config();
      const auto state = read_state(in_path);
      if (measures.empty()) measures = {"entropy", "mutual-information"};
      const Side side = parse_side(measured_name);
      Table table{{"measure", "measured", "value", "converged", "evaluations"}, {}};
      for (const auto& m : measures) {
        const auto v = compute_measure(m, state, side, cfg);
        table.rows.push_back({m, measured_name, v.value.to_string(12), v.converged ? "true" : "false",
                              std::to_string(v.evaluations)});
      }
      if (mc.format == "table") {
        Table brief{{"measure", "value"}, {}};
        for (const auto& row : table.rows) brief.rows.push_back({row[0], row[2]});
        out << to_text_table(brief);
        if (!mc.out_path.empty()) write_file(mc.out_path, to_csv(table));
      } else {
        emit(table, mc, out);
      }
      return kExitOk;
    }

    if (*rsp) {
      std::optional<DensityMatrix> state;
      if (*k_opt) {
        state = sigma_family(k, t);
        if (!rsp_state.empty()) {
          if (std::filesystem::exists(rsp_state)) {
            const auto stored = read_state(rsp_state);
            if (stored.dims() != state->dims() || max_abs_diff(stored.matrix(), state->matrix()) > 1e-9) {
              throw ValidationError("state in " + rsp_state + " differs from sigma(k, t)");
            }
          } else {
            write_state(*state, rsp_state);
          }
        }
      } else if (!rsp_state.empty()) {
        state = read_state(rsp_state);
      } else {
        throw ValidationError("rsp: give --state or --k/--t");
      }
      if (state->dims() != Dims{2, 2}) throw DimensionError("rsp: state must have dims (2,2)");
      if (worst_case) {
        const auto form = two_qubit_form(*state);
        const auto wc = rsp_worst_case(form);
        const auto check = rsp_discord_bound_check(*state);
        Table table{{"worst_case_avg", "two_dg", "beta_star", "condition"},
                    {{format_number(wc.value), format_number(check.rhs),
                      format_number(wc.beta_star.x()) + " " + format_number(wc.beta_star.y()) + " " +
                          format_number(wc.beta_star.z()),
                      check.note}}};
        if (rc.format == "table") {
          out << "worst_case_avg = " << format_number(wc.value, 6) << "\n";
          out << "2D_G = " << format_number(check.rhs, 6) << "\n";
          out << "condition: " << check.note << "\n";
          if (!rc.out_path.empty()) write_file(rc.out_path, to_csv(table));
        } else {
          emit(table, rc, out);
        }
        if (check.condition_met && !check.holds) return kExitValidation;
        return kExitOk;
      }
      const auto report = rsp_simulate(*state, to_bloch(s_vec), to_bloch(beta_vec), trials, rc.seed);
      if (rc.format == "json") {
        out << to_json(report) << "\n";
        if (!rc.out_path.empty()) write_file(rc.out_path, to_json(report) + "\n");
      } else {
        Table row{csv_header(report), {csv_row(report)}};
        if (report.sampled_payoff) {
          row.header.insert(row.header.end(), {"sampled_overlap", "sampled_overlap_stderr", "sampled_payoff"});
          row.rows[0].insert(row.rows[0].end(), {format_number(*report.sampled_overlap),
                                                 format_number(*report.sampled_overlap_stderr),
                                                 format_number(*report.sampled_payoff)});
        }
        out << (rc.format == "csv" ? to_csv(row) : to_text_table(report_table(row.header, row.rows[0])));
        if (!rc.out_path.empty()) write_file(rc.out_path, to_csv(row));
      }
      return kExitOk;
    }

    if (*distribute) {
      const auto state = read_state(dist_in);
      const auto report = dist_inequality_check(state, dc.config());
      if (dc.format == "json") {
        out << to_json(report) << "\n";
        if (!dc.out_path.empty()) write_file(dc.out_path, to_json(report) + "\n");
      } else {
        Table row{csv_header(report), {csv_row(report)}};
        out << (dc.format == "csv" ? to_csv(row) : to_text_table(report_table(row.header, row.rows[0])));
        if (!dc.out_path.empty()) write_file(dc.out_path, to_csv(row));
      }
      if (!report.soft_check_passed) {
        err << "note: soft check exceeded (slack " << format_number(report.soft_slack, 6)
            << "); both entanglement values are upper bounds\n";
      }
      if (!(report.chain_residual < 1e-9) || !report.hard_check_passed) {
        err << "error: distribution check failed\n";
        return kExitValidation;
      }
      return kExitOk;
    }

    if (*transmit) {
      const auto state = read_state(trans_in);
      const auto report = transmission_ic(state, parse_side(trans_side), tc.config());
      if (tc.format == "json") {
        out << to_json(report) << "\n";
        if (!tc.out_path.empty()) write_file(tc.out_path, to_json(report) + "\n");
      } else {
        Table row{csv_header(report), {csv_row(report)}};
        out << (tc.format == "csv" ? to_csv(row) : to_text_table(report_table(row.header, row.rows[0])));
        if (!tc.out_path.empty()) write_file(tc.out_path, to_csv(row));
      }
      if (!(report.tau_identity_residual < 1e-9)) {
        err << "error: I(tau) differs from J by " << format_number(report.tau_identity_residual, 6) << "\n";
        return kExitValidation;
      }
      return kExitOk;
    }

    if (*sweep) {
      if (grid_given_empty) throw ValidationError("sweep: parameter grid is empty");
      if (sweep_measures.empty()) sweep_measures = {"geometric-discord", "concurrence"};
      const auto table = run_sweep(family, grid, t_grid, sweep_measures, parse_side(sweep_side), sc.config());
      emit(table, sc, out);
      return kExitOk;
    }

    if (*random) {
      DensityMatrix state = gen_family == "werner"  ? werner(param_p)
                            : gen_family == "sigma" ? sigma_family(param_k, param_t)
                            : ancilla == 0          ? random_pure(dims, gc.seed)
                                                    : random_mixed(dims, ancilla, gc.seed);
      const std::string text = state_to_json(state);
      if (gc.out_path.empty()) {
        out << text << "\n";
      } else {
        write_file(gc.out_path, text + "\n");
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}

}  // namespace qcorr::cli
