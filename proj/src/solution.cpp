#include "sscfem/solution.hpp"

#include "sscfem/error.hpp"
#include "sscfem/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sscfem {

std::size_t MeasureSolution::cell_of(double x) const {
    if (!(x >= breakpoints.front() && x <= breakpoints.back())) {
        throw InputError("point outside the state space");
    }
    if (x == breakpoints.back()) {
        return cells() - 1;
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

ControlWeights MeasureSolution::weights() const {
    ControlWeights w;
    w.beta = relaxed_control;
    w.w_left = left.weight;
    w.w_right = right.weight;
    w.zeta_left = left.zeta;
    w.zeta_right = right.zeta;
    return w;
}

namespace {

SingularPart singular_part(const std::vector<double>& z, const MeasureLayout& layout, Side side) {
    const std::size_t nu = layout.control_count();
    SingularPart part;
    part.zeta.resize(nu);
    for (std::size_t i = 0; i < nu; ++i) {
        const double s = std::max(0.0, z[layout.singular_column(side, i)]);
        part.zeta[i] = s;
        part.weight += s;
    }
    if (part.weight > 0.0) {
        for (double& v : part.zeta) {
            v /= part.weight;
        }
    } else {
        std::fill(part.zeta.begin(), part.zeta.end(), 1.0 / static_cast<double>(nu));
    }
    return part;
}

} // namespace

MeasureSolution extract(const LPResult& result, const MeasureLayout& layout) {
    if (result.status != LPStatus::Optimal) {
        throw StateError("cannot extract measures from a " + to_string(result.status) + " LP result");
    }
    if (result.z.size() != layout.columns()) {
        throw InputError("LP solution does not match the measure layout");
    }
    const std::size_t cells = layout.cells();
    const std::size_t nu = layout.control_count();
    MeasureSolution sol;
    sol.breakpoints = layout.breakpoints;
    sol.controls = layout.controls;
    sol.density.resize(cells);
    sol.relaxed_control.resize(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(nu));
    for (std::size_t j = 0; j < cells; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        double mass = 0.0;
        for (std::size_t i = 0; i < nu; ++i) {
            const double v = std::max(0.0, result.z[layout.density_column(j, i)]);
            sol.relaxed_control(row, static_cast<Eigen::Index>(i)) = v;
            mass += v;
        }
        sol.density[j] = mass / layout.cell_width(j);
        if (mass > 0.0) {
            sol.relaxed_control.row(row) /= mass;
        } else {
            sol.relaxed_control.row(row).setConstant(1.0 / static_cast<double>(nu));
        }
    }
    sol.left = singular_part(result.z, layout, Side::Left);
    sol.right = singular_part(result.z, layout, Side::Right);
    sol.cost = result.objective;
    return sol;
}

double average_control(const MeasureSolution& sol, double x) {
    const auto j = static_cast<Eigen::Index>(sol.cell_of(x));
    double avg = 0.0;
    for (std::size_t i = 0; i < sol.controls.size(); ++i) {
        avg += sol.controls[i] * sol.relaxed_control(j, static_cast<Eigen::Index>(i));
    }
    return avg;
}

double recompute_cost(const ControlProblem& problem, const MeasureSolution& sol) {
    const ScaledCosts costs = scaled_costs(problem);
    double total = 0.0;
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        if (sol.density[j] == 0.0) {
            continue;
        }
        const double a = sol.breakpoints[j];
        const double b = sol.breakpoints[j + 1];
        double cell = 0.0;
        for (std::size_t i = 0; i < sol.controls.size(); ++i) {
            const double beta = sol.relaxed_control(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            if (beta == 0.0) {
                continue;
            }
            const double u = sol.controls[i];
            cell += beta * gauss5([&](double x) { return costs.c0(x, u); }, a, b);
        }
        total += sol.density[j] * cell;
    }
    for (Side side : {Side::Left, Side::Right}) {
        const SingularPart& part = side == Side::Left ? sol.left : sol.right;
        for (std::size_t i = 0; i < sol.controls.size(); ++i) {
            total += part.weight * part.zeta[i] * costs.c1(side)(sol.controls[i]);
        }
    }
    return total;
}

double l1_density_error(const MeasureSolution& sol, const std::function<double(double)>& reference,
                        std::span<const double> cuts) {
    double total = 0.0;
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        const double a = sol.breakpoints[j];
        const double b = sol.breakpoints[j + 1];
        std::vector<double> pts{a};
        for (double c : cuts) {
            if (c > a && c < b) {
                pts.push_back(c);
            }
        }
        std::sort(pts.begin() + 1, pts.end());
        pts.push_back(b);
        const double gamma = sol.density[j];
        for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
            total += gauss5([&](double x) { return std::abs(gamma - reference(x)); }, pts[s], pts[s + 1]);
        }
    }
    return total;
}

CostError cost_error(double cost, double reference) {
    CostError e;
    e.absolute = std::abs(cost - reference);
    if (reference != 0.0) {
        e.relative = e.absolute / std::abs(reference);
    } else if (e.absolute != 0.0) {
        e.relative = std::numeric_limits<double>::quiet_NaN();
        e.relative_defined = false;
    }
    return e;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf;
}

} // namespace

void write_density_csv(std::ostream& out, const MeasureSolution& sol) {
    out << "x_left,x_right,gamma\n";
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        put(out, sol.breakpoints[j]);
        out << ',';
        put(out, sol.breakpoints[j + 1]);
        out << ',';
        put(out, sol.density[j]);
        out << '\n';
    }
}

void write_control_csv(std::ostream& out, const MeasureSolution& sol) {
    const std::size_t nu = sol.controls.size();
    out << "x_left,x_right";
    for (std::size_t i = 0; i < nu; ++i) {
        out << ",u_" << i;
    }
    for (std::size_t i = 0; i < nu; ++i) {
        out << ",beta_" << i;
    }
    out << '\n';
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        put(out, sol.breakpoints[j]);
        out << ',';
        put(out, sol.breakpoints[j + 1]);
        for (double u : sol.controls) {
            out << ',';
            put(out, u);
        }
        for (std::size_t i = 0; i < nu; ++i) {
            out << ',';
            put(out, sol.relaxed_control(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
        }
        out << '\n';
    }
}

void write_average_control_csv(std::ostream& out, const MeasureSolution& sol) {
    out << "x_left,x_right,average_control\n";
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        const double a = sol.breakpoints[j];
        const double b = sol.breakpoints[j + 1];
        put(out, a);
        out << ',';
        put(out, b);
        out << ',';
        put(out, average_control(sol, 0.5 * (a + b)));
        out << '\n';
    }
}

} // namespace sscfem
