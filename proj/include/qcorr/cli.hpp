#pragma once

// Batch front end shared by tools/qcorr and the tests.
//
// Exit statuses: 0 ok, 2 parse error, 3 validation error or failed check,
// 4 unsupported dimensions, 1 anything else.

#include <iosfwd>
#include <string>
#include <vector>

#include "qcorr/correlations.hpp"

namespace qcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitUnsupported = 4;

/// Registered measure names, in display order.
const std::vector<std::string>& measure_names();

struct MeasureValue {
  std::string name;
  Bits value = Bits::finite(0.0);
  bool converged = true;
  std::size_t evaluations = 0;
};

/// Evaluates one registered measure. Bipartite measures use the cut
/// {0} | rest; `measured` selects the measured side where relevant.
MeasureValue compute_measure(const std::string& name, const DensityMatrix& state, Side measured,
                             const OptimizerConfig& cfg);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// One row per grid point, in grid order. `family` is "werner" (grid over p)
/// or "sigma" (grid over k crossed with t_grid).
Table run_sweep(const std::string& family, const std::vector<double>& grid, const std::vector<double>& t_grid,
                const std::vector<std::string>& measures, Side measured, const OptimizerConfig& cfg);

std::string to_csv(const Table& table);
std::string to_text_table(const Table& table);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcorr::cli
