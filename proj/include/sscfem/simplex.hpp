#pragma once

#include "sscfem/sparse.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sscfem {

/// minimize c^T z  subject to  A z = b,  G z <= h,  z >= 0.
struct StandardLP {
    std::vector<double> c;
    SparseMatrix A;
    std::vector<double> b;
    SparseMatrix G;
    std::vector<double> h;

    std::size_t variables() const { return c.size(); }
    /// Throws InputError on inconsistent dimensions or non-finite data.
    void validate() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(LPStatus status);

struct SolveOptions {
    double pivot_tol = 1e-9;
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-9;
    long max_iters = 0;            // 0: 50 * (rows + variables) capped at 10^7
    int refactor_interval = 50;    // pivots between fresh factorizations of the basis
    long stall_threshold = 0;      // non-improving pivots before Bland's rule; 0: max(100, rows)
    std::size_t pricing_chunk = 0; // columns priced per partial-pricing block; 0: automatic
    bool scale = true;             // power-of-two geometric row/column scaling
    double perturbation = 1e-7;    // random lower-bound shift against degeneracy; 0 disables
};

struct LPResult {
    LPStatus status = LPStatus::NumericalFailure;
    std::vector<double> z;       // structural variables
    double objective = 0.0;
    std::vector<double> dual;    // equality rows, then inequality rows (<= 0)
    long iterations = 0;
    long phase_one_iterations = 0;
    double primal_residual = 0.0;  // max(|Az - b|, max(Gz - h, 0), max(-z, 0))
    std::vector<std::size_t> basis;  // basic variables: j < n structural, n + i slack of G row i
};

/// Two-phase revised simplex with an explicit dense basis inverse.
///
/// Columns are priced in blocks (partial pricing), the ratio test is Harris' two-pass variant
/// preferring the largest pivot, and Bland's rule takes over after `stall_threshold`
/// consecutive pivots without objective progress. Both phases run on a problem whose variable
/// lower bounds are shifted by small deterministic amounts; the final basis is re-evaluated on
/// the original data, and the solve is repeated unperturbed if that basis is not feasible.
/// Redundant equality rows are tolerated:
/// their artificial variables stay basic at zero level. Deterministic for identical inputs.
/// A nonempty `warm_basis` (as in LPResult::basis) is completed with artificials and, when it
/// is primal feasible, phase I is skipped.
LPResult solve(const StandardLP& lp, const SolveOptions& options = {}, std::span<const std::size_t> warm_basis = {});

/// Reduced costs c - A^T y_eq - G^T y_ineq for the structural variables.
std::vector<double> reduced_costs(const StandardLP& lp, const std::vector<double>& dual);

} // namespace sscfem
