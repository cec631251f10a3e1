#include "sscfem/pipeline.hpp"

#include "sscfem/error.hpp"
#include "sscfem/oracle.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sscfem {

namespace fs = std::filesystem;

SolveOutcome solve_once(const ControlProblem& problem, const DiscretizationConfig& discretization, int repetitions,
                        unsigned threads, const SolveOptions& options) {
    discretization.validate();
    if (repetitions < 1) {
        throw InputError("repetitions must be >= 1");
    }
    SolveOutcome out;
    out.discretization = discretization;
    double total = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const BSplineBasis basis(KnotGrid::dyadic(problem.state_lo, problem.state_hi, discretization.spline_level));
        MeasureLayout layout = build_layout(problem, discretization);
        const DiscreteLP lp = assemble_lp(problem, basis, layout, threads);
        LPResult result = solve_discrete(lp, layout, options);
        total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (rep + 1 == repetitions) {
            out.splines = static_cast<std::size_t>(basis.size());
            out.layout = std::move(layout);
            out.lp = std::move(result);
        }
    }
    out.runtime_s = total / repetitions;
    if (out.lp.status == LPStatus::Optimal) {
        out.solution = extract(out.lp, out.layout);
    }
    return out;
}

namespace {

using nlohmann::json;

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw ConfigError("cannot write '" + tmp.string() + "'");
        }
        f << content;
        if (!f) {
            throw ConfigError("cannot write '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

json maybe(bool ok, double v) { return ok && std::isfinite(v) ? json(v) : json(nullptr); }

struct Reference {
    double a = 0.0;
    double cost = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    std::optional<StationaryDensity> density;
};

Reference make_reference(const RunConfig& config) {
    const BoundedFollowerReference table = reference_table();
    const double sigma = config.sigma.value_or(table.sigma);
    const double c1 = config.c1.value_or(table.c1);
    Reference ref;
    const bool canonical = std::abs(sigma - table.sigma) < 1e-12 && std::abs(c1 - table.c1) < 1e-12;
    ref.a = canonical ? table.a : optimal_threshold(sigma, c1);
    ref.density.emplace(ref.a, sigma);
    ref.cost = ref.density->expectation([](double x) { return x * x; }) + c1 * ref.density->jump_weight();
    if (canonical) {
        ref.w1 = table.w1;
        ref.w2 = table.w2;
    } else {
        ref.w1 = ref.density->reflection_weight();
        ref.w2 = ref.density->jump_weight();
    }
    return ref;
}

} // namespace

int run(const RunConfig& config, std::ostream& log) {
    const auto diagnostics = validate_config(config);
    for (const auto& d : diagnostics) {
        log << (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") << d.message << '\n';
    }
    if (has_errors(diagnostics)) {
        return kExitUsage;
    }

    ControlProblem problem;
    std::vector<DiscretizationConfig> entries;
    std::optional<Reference> ref;
    try {
        problem = make_problem(config);
        entries = discretizations(config);
        if (config.oracle) {
            ref = make_reference(config);
        }
        fs::create_directories(config.outdir);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ostringstream table;
    std::ostringstream table_singular;
    table << "n,m,T,J,e_a,e_r,e_L1\n";
    table_singular << "n,w1,w1_e_a,w1_e_r,w2,w2_e_a,w2_e_r\n";
    int exit_code = kExitOk;

    for (const DiscretizationConfig& d : entries) {
        const std::string name = "n" + std::to_string(d.spline_level) + "_m" + std::to_string(d.density_level);
        const fs::path dir = fs::path(config.outdir) / name;
        try {
            fs::create_directories(dir);
            const SolveOutcome outcome = solve_once(problem, d, config.repetitions, config.threads);
            json summary;
            summary["n"] = d.spline_level;
            summary["n_splines"] = outcome.splines;
            summary["m"] = d.density_level;
            summary["k_m"] = d.control_level;
            summary["solver_status"] = to_string(outcome.lp.status);
            summary["iterations"] = outcome.lp.iterations;
            summary["runtime_s"] = outcome.runtime_s;
            summary["repetitions"] = config.repetitions;
            const bool ok = outcome.solution.has_value();
            const MeasureSolution* sol = ok ? &*outcome.solution : nullptr;
            summary["J"] = maybe(ok, ok ? sol->cost : 0.0);
            summary["w1"] = maybe(ok, ok ? sol->left.weight : 0.0);
            summary["w2"] = maybe(ok, ok ? sol->right.weight : 0.0);

            ErrorReport err;
            const bool compare = ok && ref.has_value();
            if (compare) {
                const CostError ce = cost_error(sol->cost, ref->cost);
                err.e_a = ce.absolute;
                err.e_r = ce.relative;
                const double cut = ref->a;
                err.e_L1 = l1_density_error(*sol, [&](double x) { return (*ref->density)(x); }, std::span(&cut, 1));
                err.w1_error = std::abs(sol->left.weight - ref->w1);
                err.w2_error = std::abs(sol->right.weight - ref->w2);
            }
            summary["e_a"] = maybe(compare, err.e_a);
            summary["e_r"] = maybe(compare, err.e_r);
            summary["e_L1"] = maybe(compare, err.e_L1);
            if (compare) {
                summary["reference"] = {{"a", ref->a}, {"J", ref->cost}, {"w1", ref->w1}, {"w2", ref->w2}};
            }

            if (ok && config.mc) {
                const SimResult mc = simulate_lta(problem, FeedbackControl::from_solution(*sol), config.sim);
                summary["mc"] = {{"estimate", mc.estimate},
                                 {"stderr", mc.standard_error},
                                 {"reflect_rate_left", mc.reflect_rate_left},
                                 {"reflect_or_jump_rate_right", mc.reflect_or_jump_rate_right}};
            }

            if (ok) {
                std::ostringstream density, control, average;
                write_density_csv(density, *sol);
                write_control_csv(control, *sol);
                write_average_control_csv(average, *sol);
                write_atomic(dir / "density.csv", density.str());
                write_atomic(dir / "control.csv", control.str());
                write_atomic(dir / "average_control.csv", average.str());
            } else {
                exit_code = kExitSolver;
            }
            write_atomic(dir / "summary.json", summary.dump(2) + "\n");

            if (compare) {
                table << d.spline_level << ',' << d.density_level << ',' << num(outcome.runtime_s) << ','
                      << num(sol->cost) << ',' << num(err.e_a) << ',' << num(err.e_r) << ',' << num(err.e_L1) << '\n';
                table_singular << d.spline_level << ',' << num(sol->left.weight) << ',' << num(err.w1_error) << ','
                               << num(err.w1_error / ref->w1) << ',' << num(sol->right.weight) << ','
                               << num(err.w2_error) << ',' << num(err.w2_error / ref->w2) << '\n';
            }
            if (!config.quiet) {
                log << name << ": " << to_string(outcome.lp.status);
                if (ok) {
                    log << " J=" << num(sol->cost) << " w1=" << num(sol->left.weight)
                        << " w2=" << num(sol->right.weight);
                }
                if (compare) {
                    log << " e_a=" << num(err.e_a) << " e_L1=" << num(err.e_L1);
                }
                log << " T=" << num(outcome.runtime_s) << "s\n";
            }
        } catch (const ConfigError& e) {
            log << "error: " << name << ": " << e.what() << '\n';
            return kExitUsage;
        } catch (const fs::filesystem_error& e) {
            log << "error: " << name << ": " << e.what() << '\n';
            return kExitUsage;
        } catch (const Error& e) {
            log << "error: " << name << ": " << e.what() << '\n';
            return kExitUsage;
        }
    }

    if (ref) {
        try {
            write_atomic(fs::path(config.outdir) / "table.csv", table.str());
            write_atomic(fs::path(config.outdir) / "table_singular.csv", table_singular.str());
        } catch (const std::exception& e) {
            log << "error: " << e.what() << '\n';
            return kExitUsage;
        }
    }
    return exit_code;
}

} // namespace sscfem
