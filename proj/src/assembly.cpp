#include "sscfem/assembly.hpp"

#include "sscfem/error.hpp"
#include "sscfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

namespace sscfem {

void DiscretizationConfig::validate() const {
    if (spline_level < 1 || spline_level > 14) {
        throw InputError("spline level must be in [1, 14]");
    }
    if (density_level < 1 || density_level > 16) {
        throw InputError("density level must be in [1, 16]");
    }
    if (control_level < 0 || control_level > 16) {
        throw InputError("control level must be in [0, 16]");
    }
    if (!(mass_bound > 0.0) || !std::isfinite(mass_bound)) {
        throw InputError("mass bound must be finite and > 0");
    }
}

int default_control_level(const ControlProblem& problem, int density_level) {
    return problem.running_cost_depends_on_control() ? density_level + 3 : 0;
}

std::size_t MeasureLayout::cell_of(double x) const {
    if (!(x >= lo() && x <= hi())) {
        throw InputError("point outside the state space");
    }
    if (x == hi()) {
        return cells() - 1;
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

MeasureLayout build_layout(const ControlProblem& problem, const DiscretizationConfig& config) {
    config.validate();
    problem.validate();
    MeasureLayout layout;
    layout.mass_bound = config.mass_bound;

    const long cells = 1L << config.density_level;
    const double lo = problem.state_lo;
    const double hi = problem.state_hi;
    layout.breakpoints.reserve(static_cast<std::size_t>(cells + 2));
    for (long j = 0; j <= cells; ++j) {
        layout.breakpoints.push_back(j == cells ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(cells));
    }
    if (config.midpoint_refine) {
        const double mid = 0.5 * (lo + hi);
        const std::size_t j = layout.cell_of(mid);
        const double split = 0.5 * (layout.breakpoints[j] + layout.breakpoints[j + 1]);
        layout.breakpoints.insert(layout.breakpoints.begin() + static_cast<std::ptrdiff_t>(j + 1), split);
    }

    const long points = (1L << config.control_level) + 1;
    const double ulo = problem.control_lo;
    const double uhi = problem.control_hi;
    layout.controls.reserve(static_cast<std::size_t>(points));
    for (long i = 0; i < points; ++i) {
        layout.controls.push_back(i == points - 1
                                      ? uhi
                                      : ulo + (uhi - ulo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return layout;
}

CellIntegrator::CellIntegrator(const BSplineBasis& basis, double a, double b) {
    const auto knots = basis.grid().knots();
    // Split [a, b] at interior knots.
    std::vector<double> cuts{a};
    for (double k : knots) {
        if (k > a && k < b) {
            cuts.push_back(k);
        }
    }
    cuts.push_back(b);

    const auto& g = gauss_legendre5();
    std::vector<int> intervals;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        const int iv = basis.grid().interval_of(mid);
        for (std::size_t q = 0; q < 5; ++q) {
            nodes_.push_back(mid + half * g.nodes[q]);
            weights_.push_back(half * g.weights[q]);
            intervals.push_back(iv);
        }
    }
    for (int k = 0; k < basis.size(); ++k) {
        const auto [sa, sb] = basis.support(k);
        if (sa < b && sb > a) {
            splines_.push_back(k);
        }
    }
    jets_.resize(splines_.size() * nodes_.size());
    for (std::size_t s = 0; s < splines_.size(); ++s) {
        for (std::size_t q = 0; q < nodes_.size(); ++q) {
            jets_[s * nodes_.size() + q] = basis.jet_on_interval(splines_[s], intervals[q], nodes_[q]);
        }
    }
}

void CellIntegrator::generator(const ControlProblem& problem, double u, std::span<double> out) const {
    const std::size_t nq = nodes_.size();
    std::fill(out.begin(), out.end(), 0.0);
    const double alpha = problem.discount;
    for (std::size_t q = 0; q < nq; ++q) {
        const double x = nodes_[q];
        const double b = problem.drift(x, u);
        const double sig = problem.diffusion(x, u);
        if (!(sig > 0.0) || !std::isfinite(sig)) {
            std::ostringstream os;
            os << "diffusion must be > 0 on the assembly grid, got " << sig << " at (x,u)=(" << x << "," << u << ")";
            throw ModelError(os.str());
        }
        const double half_var = 0.5 * sig * sig;
        const double w = weights_[q];
        for (std::size_t s = 0; s < splines_.size(); ++s) {
            const Jet& f = jets_[s * nq + q];
            out[s] += w * (b * f.d1 + half_var * f.d2 - alpha * f.value);
        }
    }
}

double CellIntegrator::integrate(const CoefficientFn& g, double u) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        sum += weights_[q] * g(nodes_[q], u);
    }
    return sum;
}

bool singular_row(const ControlProblem& problem, const BSplineBasis& basis, Side side, double u,
                  std::vector<std::pair<int, double>>& out) {
    out.clear();
    const double e = problem.endpoint(side);
    const auto& bnd = problem.boundary(side);
    double dest = 0.0;
    const bool jump = jump_destination(problem, side, u, dest);
    if (!bnd.is_reflection() && !jump) {
        return false;
    }
    for (int k = 0; k < basis.size(); ++k) {
        const auto [sa, sb] = basis.support(k);
        const bool near_e = e >= sa && e <= sb;
        const bool near_dest = jump && dest >= sa && dest <= sb;
        if (!near_e && !near_dest) {
            continue;
        }
        double v = 0.0;
        switch (bnd.kind) {
        case BoundaryKind::ReflectRight:
            v = basis.eval(k, e, 1);
            break;
        case BoundaryKind::ReflectLeft:
            v = -basis.eval(k, e, 1);
            break;
        case BoundaryKind::JumpTo:
        case BoundaryKind::JumpByControl:
            v = basis.eval(k, dest, 0) - basis.eval(k, e, 0);
            break;
        }
        if (v != 0.0) {
            out.emplace_back(k, v);
        }
    }
    return true;
}

namespace {

struct CellBlock {
    SparseMatrix columns;
    std::vector<double> cost;
};

void assemble_cells(const ControlProblem& problem, const ScaledCosts& costs, const BSplineBasis& basis,
                    const MeasureLayout& layout, std::size_t first, std::size_t last, std::size_t rows,
                    CellBlock& block) {
    const std::size_t n = static_cast<std::size_t>(basis.size());
    const auto& us = layout.controls;
    block.columns = SparseMatrix(rows);
    block.columns.reserve((last - first) * us.size(), (last - first) * us.size() * 6);
    block.cost.reserve((last - first) * us.size());
    std::vector<double> values;
    for (std::size_t j = first; j < last; ++j) {
        const double a = layout.breakpoints[j];
        const double b = layout.breakpoints[j + 1];
        const double inv_width = 1.0 / (b - a);
        const CellIntegrator cell(basis, a, b);
        values.resize(cell.splines().size());
        for (double u : us) {
            cell.generator(problem, u, values);
            block.columns.add_column();
            double vmax = 0.0;
            for (double v : values) {
                vmax = std::max(vmax, std::abs(v));
            }
            // Zero out cancellation noise.
            const double drop = 1e-13 * vmax;
            for (std::size_t s = 0; s < values.size(); ++s) {
                if (std::abs(values[s]) > drop) {
                    block.columns.push(static_cast<std::uint32_t>(cell.splines()[s]), values[s] * inv_width);
                }
            }
            block.columns.push(static_cast<std::uint32_t>(n), 1.0);
            const double c = cell.integrate(costs.c0, u) * inv_width;
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw ModelError("running cost negative or non-finite on the assembly grid");
            }
            block.cost.push_back(c);
        }
    }
}

} // namespace

DiscreteLP assemble_lp(const ControlProblem& problem, const BSplineBasis& basis, const MeasureLayout& layout,
                       unsigned threads) {
    problem.validate();
    if (basis.grid().lo() != layout.lo() || basis.grid().hi() != layout.hi()) {
        throw InputError("spline basis and measure layout cover different state intervals");
    }
    if (layout.controls.empty() || layout.controls.front() < problem.control_lo ||
        layout.controls.back() > problem.control_hi) {
        throw InputError("measure layout controls outside the control space");
    }
    const ScaledCosts costs = scaled_costs(problem);
    const std::size_t n = static_cast<std::size_t>(basis.size());
    const std::size_t rows = n + 1;
    const std::size_t cells = layout.cells();
    const std::size_t nu = layout.control_count();

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, cells / 8)));
    std::vector<CellBlock> blocks(threads);
    if (threads == 1) {
        assemble_cells(problem, costs, basis, layout, 0, cells, rows, blocks[0]);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t first = cells * t / threads;
            const std::size_t last = cells * (t + 1) / threads;
            workers.emplace_back([&, t, first, last] {
                try {
                    assemble_cells(problem, costs, basis, layout, first, last, rows, blocks[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) {
            w.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    DiscreteLP out;
    out.generator_rows = n;
    StandardLP& lp = out.program;
    lp.A = std::move(blocks[0].columns);
    lp.c = std::move(blocks[0].cost);
    for (unsigned t = 1; t < threads; ++t) {
        lp.A.append_columns(blocks[t].columns);
        lp.c.insert(lp.c.end(), blocks[t].cost.begin(), blocks[t].cost.end());
    }

    // Singular columns.
    std::vector<std::size_t> disabled;
    std::vector<std::pair<int, double>> row;
    for (Side side : {Side::Left, Side::Right}) {
        const bool u_free = problem.boundary(side).kind != BoundaryKind::JumpByControl;
        bool cached = false;
        bool cached_ok = false;
        for (std::size_t i = 0; i < nu; ++i) {
            const double u = layout.controls[i];
            const std::size_t col = lp.A.add_column();
            bool ok = cached_ok;
            if (!u_free || !cached) {
                ok = singular_row(problem, basis, side, u, row);
                cached = true;
                cached_ok = ok;
            }
            const double c = costs.c1(side)(u);
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw ModelError("singular cost negative or non-finite on the control grid");
            }
            lp.c.push_back(c);
            if (!ok) {
                disabled.push_back(col);
                continue;
            }
            for (const auto& [k, v] : row) {
                lp.A.push(static_cast<std::uint32_t>(k), v);
            }
        }
    }

    lp.b.assign(rows, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        lp.b[k] = problem.discount == 0.0 ? 0.0 : -problem.discount * basis.eval(static_cast<int>(k), problem.start_point, 0);
    }
    lp.b[n] = 1.0;

    const std::size_t ncols = layout.columns();
    const std::size_t ineq_rows = disabled.empty() ? 1 : 2;
    lp.G = SparseMatrix(ineq_rows);
    lp.G.reserve(ncols, 2 * nu + disabled.size());
    lp.G.add_empty_columns(cells * nu);
    std::size_t next_disabled = 0;
    for (std::size_t col = cells * nu; col < ncols; ++col) {
        lp.G.add_column();
        lp.G.push(0, 1.0);
        if (next_disabled < disabled.size() && disabled[next_disabled] == col) {
            lp.G.push(1, 1.0);
            ++next_disabled;
        }
    }
    lp.h.assign(ineq_rows, 0.0);
    lp.h[0] = layout.mass_bound;
    out.disabled_columns = disabled.size();
    return out;
}

StandardLP restrict_controls(const DiscreteLP& lp, const MeasureLayout& layout, std::size_t stride,
                             std::vector<std::size_t>& columns) {
    const std::size_t nu = layout.control_count();
    if (stride == 0 || (nu - 1) % stride != 0) {
        throw InputError("control stride must divide the number of control intervals");
    }
    columns.clear();
    for (std::size_t block = 0; block < layout.cells() + 2; ++block) {
        for (std::size_t i = 0; i < nu; i += stride) {
            columns.push_back(block * nu + i);
        }
    }
    const StandardLP& full = lp.program;
    StandardLP sub;
    sub.b = full.b;
    sub.h = full.h;
    sub.A = SparseMatrix(full.A.rows());
    sub.G = SparseMatrix(full.G.rows());
    sub.c.reserve(columns.size());
    for (std::size_t j : columns) {
        sub.c.push_back(full.c[j]);
        for (auto [src, dst] : {std::pair{&full.A, &sub.A}, std::pair{&full.G, &sub.G}}) {
            dst->add_column();
            const auto rows = src->column_rows(j);
            const auto vals = src->column_values(j);
            for (std::size_t e = 0; e < rows.size(); ++e) {
                dst->push(rows[e], vals[e]);
            }
        }
    }
    return sub;
}

LPResult solve_discrete(const DiscreteLP& lp, const MeasureLayout& layout, const SolveOptions& options,
                        int coarsest_level) {
    const std::size_t intervals = layout.control_count() - 1;
    int level = 0;
    while ((std::size_t{1} << level) < intervals) {
        ++level;
    }
    if ((std::size_t{1} << level) != intervals || level <= coarsest_level) {
        return solve(lp.program, options);
    }
    const std::size_t n = lp.program.variables();
    std::vector<std::size_t> basis;
    std::vector<std::size_t> columns;
    long iterations = 0;
    long phase_one = 0;
    for (int l = (level - coarsest_level) % 2 == 0 ? coarsest_level : coarsest_level + 1; l < level; l += 2) {
        const StandardLP sub = restrict_controls(lp, layout, std::size_t{1} << (level - l), columns);
        const std::size_t ns = sub.variables();
        // Map the basis of the previous level into this one.
        std::vector<std::size_t> warm;
        for (std::size_t v : basis) {
            if (v >= n) {
                warm.push_back(ns + (v - n));
            } else {
                const auto it = std::lower_bound(columns.begin(), columns.end(), v);
                if (it != columns.end() && *it == v) {
                    warm.push_back(static_cast<std::size_t>(it - columns.begin()));
                }
            }
        }
        LPResult r = solve(sub, options, warm);
        iterations += r.iterations;
        phase_one += r.phase_one_iterations;
        if (r.status != LPStatus::Optimal) {
            basis.clear();
            break;
        }
        basis.clear();
        for (std::size_t v : r.basis) {
            basis.push_back(v >= ns ? n + (v - ns) : columns[v]);
        }
    }
    LPResult result = solve(lp.program, options, basis);
    result.iterations += iterations;
    result.phase_one_iterations += phase_one;
    return result;
}

Eigen::MatrixXd constraint_matrix(const ControlProblem& problem, const BSplineBasis& basis,
                                  const MeasureLayout& layout, const Eigen::MatrixXd& beta) {
    const std::size_t cells = layout.cells();
    const std::size_t nu = layout.control_count();
    if (static_cast<std::size_t>(beta.rows()) != cells || static_cast<std::size_t>(beta.cols()) != nu) {
        throw InputError("constraint_matrix: relaxed control must be cells x controls");
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, static_cast<Eigen::Index>(cells));
    std::vector<double> values;
    for (std::size_t j = 0; j < cells; ++j) {
        const CellIntegrator cell(basis, layout.breakpoints[j], layout.breakpoints[j + 1]);
        values.resize(cell.splines().size());
        const auto col = static_cast<Eigen::Index>(j);
        for (std::size_t i = 0; i < nu; ++i) {
            const double weight = beta(col, static_cast<Eigen::Index>(i));
            if (weight == 0.0) {
                continue;
            }
            cell.generator(problem, layout.controls[i], values);
            for (std::size_t s = 0; s < values.size(); ++s) {
                c(cell.splines()[s], col) += weight * values[s];
            }
        }
        c(n, col) = layout.cell_width(j);
    }
    return c;
}

std::vector<double> constraint_error(const ControlProblem& problem, const BSplineBasis& basis,
                                     const MeasureLayout& layout, std::span<const double> density,
                                     const ControlWeights& controls) {
    const std::size_t cells = layout.cells();
    const std::size_t nu = layout.control_count();
    if (density.size() != cells) {
        throw InputError("constraint_error: density must have one weight per cell");
    }
    const Eigen::MatrixXd c = constraint_matrix(problem, basis, layout, controls.beta);
    const auto n = static_cast<std::size_t>(basis.size());
    const Eigen::Map<const Eigen::VectorXd> p(density.data(), static_cast<Eigen::Index>(cells));
    const Eigen::VectorXd integrals = c * p;

    std::vector<double> d(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double rf = problem.discount == 0.0 ? 0.0 : -problem.discount * basis.eval(static_cast<int>(k), problem.start_point, 0);
        d[k] = rf - integrals[static_cast<Eigen::Index>(k)];
    }
    d[n] = 1.0 - integrals[static_cast<Eigen::Index>(n)];

    std::vector<std::pair<int, double>> row;
    for (Side side : {Side::Left, Side::Right}) {
        const double w = side == Side::Left ? controls.w_left : controls.w_right;
        const auto& zeta = side == Side::Left ? controls.zeta_left : controls.zeta_right;
        if (w == 0.0) {
            continue;
        }
        if (zeta.size() != nu) {
            throw InputError("constraint_error: singular control weights must have one entry per control");
        }
        for (std::size_t i = 0; i < nu; ++i) {
            if (zeta[i] == 0.0 || !singular_row(problem, basis, side, layout.controls[i], row)) {
                continue;
            }
            for (const auto& [k, v] : row) {
                d[static_cast<std::size_t>(k)] -= w * zeta[i] * v;
            }
        }
    }
    return d;
}

void write_lp_text(std::ostream& out, const StandardLP& lp) {
    const std::size_t n = lp.variables();
    const auto old_precision = out.precision(17);
    out << lp.A.rows() << ' ' << lp.G.rows() << ' ' << n << '\n';
    for (std::size_t j = 0; j < n; ++j) {
        out << (j ? " " : "") << lp.c[j];
    }
    out << '\n';
    auto dump = [&](const SparseMatrix& m, const std::vector<double>& rhs, char sense) {
        const Eigen::MatrixXd d = m.to_dense();
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            out << sense << ' ' << rhs[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                out << ' ' << d(i, j);
            }
            out << '\n';
        }
    };
    dump(lp.A, lp.b, 'E');
    dump(lp.G, lp.h, 'L');
    out.precision(old_precision);
}

StandardLP read_lp_text(std::istream& in) {
    std::size_t me = 0, mi = 0, n = 0;
    if (!(in >> me >> mi >> n)) {
        throw InputError("LP text: bad header");
    }
    StandardLP lp;
    lp.c.resize(n);
    for (auto& v : lp.c) {
        if (!(in >> v)) {
            throw InputError("LP text: bad objective");
        }
    }
    auto read_rows = [&](std::size_t rows, char expect, std::vector<double>& rhs) {
        Eigen::MatrixXd d(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
        rhs.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            char sense = 0;
            if (!(in >> sense >> rhs[i]) || sense != expect) {
                throw InputError("LP text: bad row header");
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!(in >> d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
                    throw InputError("LP text: truncated row");
                }
            }
        }
        return SparseMatrix::from_dense(d);
    };
    lp.A = read_rows(me, 'E', lp.b);
    lp.G = read_rows(mi, 'L', lp.h);
    return lp;
}

} // namespace sscfem
