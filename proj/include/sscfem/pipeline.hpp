#pragma once

#include "sscfem/assembly.hpp"
#include "sscfem/config.hpp"
#include "sscfem/simplex.hpp"
#include "sscfem/simulate.hpp"
#include "sscfem/solution.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace sscfem {

/// One assemble + solve + extract cycle.
struct SolveOutcome {
    DiscretizationConfig discretization;
    MeasureLayout layout;
    LPResult lp;
    std::optional<MeasureSolution> solution;  // set when the LP is optimal
    std::size_t splines = 0;
    double runtime_s = 0.0;  // average wall clock of assembly + solve
};

/// Runs assembly and solve `repetitions` times (timing average) and extracts the measures of the
/// last run.
SolveOutcome solve_once(const ControlProblem& problem, const DiscretizationConfig& discretization,
                        int repetitions = 1, unsigned threads = 0, const SolveOptions& options = {});

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitSolver = 3 };

/// Every sweep entry is solved and written to <outdir>/n<q>_m<m>/ (summary.json, density.csv,
/// control.csv, average_control.csv); with the oracle on, table.csv and table_singular.csv
/// aggregate the sweep in <outdir>. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log);

} // namespace sscfem
