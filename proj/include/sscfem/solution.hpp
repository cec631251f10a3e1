#pragma once

#include "sscfem/assembly.hpp"
#include "sscfem/model.hpp"
#include "sscfem/simplex.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace sscfem {

struct SingularPart {
    double weight = 0.0;        // w
    std::vector<double> zeta;   // distribution over the control points, sums to 1
};

/// Measures reconstructed from an optimal LP solution: piecewise constant density gamma_j on
/// the cells, relaxed control beta_{j,i} per cell, and the point masses at both endpoints.
struct MeasureSolution {
    std::vector<double> breakpoints;
    std::vector<double> controls;
    std::vector<double> density;   // gamma_j
    Eigen::MatrixXd relaxed_control;  // beta, cells x controls
    SingularPart left;
    SingularPart right;
    double cost = 0.0;             // LP objective

    std::size_t cells() const { return density.size(); }
    std::size_t cell_of(double x) const;
    double density_at(double x) const { return density[cell_of(x)]; }
    ControlWeights weights() const;
};

/// Inverts the cell-mass change of variables. Throws StateError unless the result is Optimal.
MeasureSolution extract(const LPResult& result, const MeasureLayout& layout);

/// sum_i u_i beta_{j(x), i}.
double average_control(const MeasureSolution& sol, double x);

/// J recomputed from the reconstructed measures.
double recompute_cost(const ControlProblem& problem, const MeasureSolution& sol);

/// L1(E) distance between the piecewise constant density and `reference`, by 5-point
/// Gauss-Legendre per cell; `cuts` adds extra split points (kinks of the reference).
double l1_density_error(const MeasureSolution& sol, const std::function<double(double)>& reference,
                        std::span<const double> cuts = {});

struct CostError {
    double absolute = 0.0;
    double relative = 0.0;
    bool relative_defined = true;  // false when the reference is 0 and J is not
};

CostError cost_error(double cost, double reference);

struct ErrorReport {
    double e_a = 0.0;
    double e_r = 0.0;
    double e_L1 = 0.0;
    double w1_error = 0.0;
    double w2_error = 0.0;
    double runtime_s = 0.0;
};

// CSV writers; columns as documented in the README.
void write_density_csv(std::ostream& out, const MeasureSolution& sol);
void write_control_csv(std::ostream& out, const MeasureSolution& sol);
void write_average_control_csv(std::ostream& out, const MeasureSolution& sol);

} // namespace sscfem
