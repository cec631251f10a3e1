#pragma once

#include "sscfem/model.hpp"
#include "sscfem/simplex.hpp"
#include "sscfem/splines.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace sscfem {

struct DiscretizationConfig {
    int spline_level = 3;      // knot grid has 2^spline_level intervals
    int density_level = 3;     // 2^density_level density cells
    int control_level = 0;     // 2^control_level + 1 control points
    double mass_bound = 10.0;  // bound on total singular mass
    bool midpoint_refine = false;

    void validate() const;
    bool operator==(const DiscretizationConfig&) const = default;
};

/// 0 when the running cost ignores u, density_level + 3 otherwise.
int default_control_level(const ControlProblem& problem, int density_level);

/// Density cells E_j = [x_j, x_{j+1}) (last one closed), control points u_i, and the LP column
/// order: v_{j,i} (cell mass on E_j x {u_i}) row-major by cell, then s_{L,i}, then s_{R,i}.
struct MeasureLayout {
    std::vector<double> breakpoints;
    std::vector<double> controls;
    double mass_bound = 10.0;

    std::size_t cells() const { return breakpoints.size() - 1; }
    std::size_t control_count() const { return controls.size(); }
    double cell_width(std::size_t j) const { return breakpoints[j + 1] - breakpoints[j]; }
    double lo() const { return breakpoints.front(); }
    double hi() const { return breakpoints.back(); }
    /// Cell containing x; x == hi belongs to the last cell. Throws InputError outside.
    std::size_t cell_of(double x) const;

    std::size_t density_column(std::size_t j, std::size_t i) const { return j * controls.size() + i; }
    std::size_t singular_column(Side side, std::size_t i) const {
        return cells() * controls.size() + (side == Side::Left ? 0 : controls.size()) + i;
    }
    std::size_t columns() const { return (cells() + 2) * controls.size(); }
};

MeasureLayout build_layout(const ControlProblem& problem, const DiscretizationConfig& config);

/// Equality rows 0..generator_rows-1 hold the generator constraints for each spline, row
/// generator_rows the total mass. Inequality row 0 bounds the singular mass; a second row
/// pins to zero singular columns whose jump would leave E (present only when needed).
struct DiscreteLP {
    StandardLP program;
    std::size_t generator_rows = 0;
    std::size_t disabled_columns = 0;

    std::size_t mass_row() const { return generator_rows; }
    const std::vector<double>& objective() const { return program.c; }
    const SparseMatrix& eq_matrix() const { return program.A; }
    const std::vector<double>& eq_rhs() const { return program.b; }
};

/// Quadrature over one density cell, split at the spline knots it straddles, with the jets of
/// every overlapping spline precomputed at the nodes.
class CellIntegrator {
public:
    CellIntegrator(const BSplineBasis& basis, double a, double b);

    /// Indices of the splines whose support overlaps the cell.
    const std::vector<int>& splines() const { return splines_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// out[s] = integral over the cell of A f_{splines()[s]}(x, u) dx.
    void generator(const ControlProblem& problem, double u, std::span<double> out) const;
    /// Integral of g(x, u) dx over the cell.
    double integrate(const CoefficientFn& g, double u) const;

private:
    std::vector<int> splines_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<Jet> jets_;  // jets_[s * nodes + q]
};

/// Bf_k at `side` for control u, as (spline index, value) pairs with nonzero value.
/// Returns false when the jump for u would leave E.
bool singular_row(const ControlProblem& problem, const BSplineBasis& basis, Side side, double u,
                  std::vector<std::pair<int, double>>& out);

/// Assembles the finite LP. threads = 0 uses the hardware concurrency.
DiscreteLP assemble_lp(const ControlProblem& problem, const BSplineBasis& basis, const MeasureLayout& layout,
                       unsigned threads = 0);

/// The LP restricted to the control points u_i with i a multiple of `stride`; `columns` receives
/// the original index of every kept column.
StandardLP restrict_controls(const DiscreteLP& lp, const MeasureLayout& layout, std::size_t stride,
                             std::vector<std::size_t>& columns);

/// Solves the LP by continuation over the nested control grids: the problem on every second
/// coarser control level is solved first and its optimal basis seeds the next level.
LPResult solve_discrete(const DiscreteLP& lp, const MeasureLayout& layout, const SolveOptions& options = {},
                        int coarsest_level = 4);

/// Per-cell relaxed control and singular part of a candidate measure pair.
struct ControlWeights {
    Eigen::MatrixXd beta;  // cells x controls, rows sum to 1
    double w_left = 0.0;
    double w_right = 0.0;
    std::vector<double> zeta_left;
    std::vector<double> zeta_right;
};

/// C_{k,j} = sum_i beta_{j,i} integral over E_j of A f_k(x, u_i) dx; the last row holds |E_j|.
Eigen::MatrixXd constraint_matrix(const ControlProblem& problem, const BSplineBasis& basis,
                                  const MeasureLayout& layout, const Eigen::MatrixXd& beta);

/// d_k = R f_k - int int A f_k eta0 p dx - int int B f_k eta1 dmu1, and d_{n} = 1 - int p,
/// for the piecewise constant density with cell values `density`.
std::vector<double> constraint_error(const ControlProblem& problem, const BSplineBasis& basis,
                                     const MeasureLayout& layout, std::span<const double> density,
                                     const ControlWeights& controls);

// Plain-text LP dump:
//   line 1:  <equality rows> <inequality rows> <columns>
//   line 2:  objective coefficients
//   then one line per row:  E|L <rhs> <dense coefficients>
void write_lp_text(std::ostream& out, const StandardLP& lp);
StandardLP read_lp_text(std::istream& in);

} // namespace sscfem
