#include "sscfem/simulate.hpp"

#include "sscfem/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace sscfem {

void SimConfig::validate(const ControlProblem& problem) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InputError("mc.dt must be > 0");
    }
    if (!(horizon > 0.0) || !(burn_in >= 0.0) || !(burn_in < horizon)) {
        throw InputError("mc.burn_in must lie in [0, mc.horizon)");
    }
    if (paths < 1) {
        throw InputError("mc.paths must be >= 1");
    }
    if (!(dt < 1e-2 * (problem.state_hi - problem.state_lo))) {
        throw InputError("mc.dt must be small against the state interval");
    }
}

namespace {

std::vector<double> to_cdf(const std::vector<double>& w) {
    std::vector<double> cdf(w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += std::max(0.0, w[i]);
        cdf[i] = acc;
    }
    if (!(acc > 0.0)) {
        throw InputError("control distribution has no mass");
    }
    for (double& c : cdf) {
        c /= acc;
    }
    cdf.back() = 1.0;
    return cdf;
}

} // namespace

FeedbackControl::FeedbackControl(std::vector<double> breakpoints, std::vector<double> controls,
                                 std::vector<std::vector<double>> cell_weights, std::vector<double> zeta_left,
                                 std::vector<double> zeta_right)
    : breakpoints_(std::move(breakpoints)), controls_(std::move(controls)) {
    if (breakpoints_.size() < 2 || cell_weights.size() + 1 != breakpoints_.size()) {
        throw InputError("feedback control needs one weight vector per cell");
    }
    for (const auto& w : cell_weights) {
        if (w.size() != controls_.size()) {
            throw InputError("feedback control weights must match the control points");
        }
        cdf_.push_back(to_cdf(w));
    }
    if (zeta_left.size() != controls_.size() || zeta_right.size() != controls_.size()) {
        throw InputError("singular control weights must match the control points");
    }
    cdf_left_ = to_cdf(zeta_left);
    cdf_right_ = to_cdf(zeta_right);
}

FeedbackControl FeedbackControl::from_solution(const MeasureSolution& sol) {
    std::vector<std::vector<double>> w(sol.cells());
    for (std::size_t j = 0; j < sol.cells(); ++j) {
        const auto row = sol.relaxed_control.row(static_cast<Eigen::Index>(j));
        for (Eigen::Index i = 0; i < row.size(); ++i) {
            w[j].push_back(row[i]);
        }
    }
    return FeedbackControl(sol.breakpoints, sol.controls, std::move(w), sol.left.zeta, sol.right.zeta);
}

FeedbackControl FeedbackControl::constant(double lo, double hi, double u) {
    return FeedbackControl({lo, hi}, {u}, {{1.0}}, {1.0}, {1.0});
}

double FeedbackControl::draw(const std::vector<double>& values, const std::vector<double>& cdf, double v) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), v);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), values.size() - 1);
    return values[i];
}

double FeedbackControl::sample(double x, double v) const {
    std::size_t j = 0;
    if (x >= breakpoints_.back()) {
        j = cdf_.size() - 1;
    } else if (x > breakpoints_.front()) {
        j = static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin()) - 1;
    }
    return draw(controls_, cdf_[j], v);
}

double FeedbackControl::sample_singular(Side side, double v) const {
    return draw(controls_, side == Side::Left ? cdf_left_ : cdf_right_, v);
}

namespace {

struct PathTotals {
    double cost = 0.0;
    double left = 0.0;
    double right = 0.0;
};

PathTotals run_path(const ControlProblem& p, const FeedbackControl& control, const SimConfig& cfg, int path) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(path)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const double lo = p.state_lo;
    const double hi = p.state_hi;
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const long steps = static_cast<long>(std::llround(cfg.horizon / dt));
    const long burn = static_cast<long>(std::llround(cfg.burn_in / dt));

    double x = p.start_point;
    PathTotals t;
    for (long n = 0; n < steps; ++n) {
        const bool record = n >= burn;
        const double u = control.sample(x, uniform(rng));
        if (record) {
            t.cost += p.running_cost(x, u) * dt;
        }
        x += p.drift(x, u) * dt + p.diffusion(x, u) * sqdt * normal(rng);
        for (Side side : {Side::Left, Side::Right}) {
            const bool out = side == Side::Left ? x < lo : x > hi;
            if (!out) {
                continue;
            }
            const BoundaryBehavior& b = p.boundary(side);
            const double e = p.endpoint(side);
            const double us = control.sample_singular(side, uniform(rng));
            double amount = 1.0;
            if (b.is_reflection()) {
                amount = std::abs(e - x);
                x = e;
            } else {
                double dest = 0.0;
                if (!jump_destination(p, side, us, dest)) {
                    throw ModelError("simulated jump leaves the state space");
                }
                x = dest;
            }
            if (record) {
                t.cost += p.singular_cost(side)(us) * amount;
                (side == Side::Left ? t.left : t.right) += amount;
            }
        }
    }
    return t;
}

} // namespace

SimResult simulate_lta(const ControlProblem& problem, const FeedbackControl& control, const SimConfig& config) {
    if (problem.discount != 0.0) {
        throw InputError("simulation supports the long-term average criterion only (discount must be 0)");
    }
    problem.validate();
    config.validate(problem);

    std::vector<PathTotals> totals(static_cast<std::size_t>(config.paths));
    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(config.paths));
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned t) {
        try {
            for (int path = static_cast<int>(t); path < config.paths; path += static_cast<int>(threads)) {
                totals[static_cast<std::size_t>(path)] = run_path(problem, control, config, path);
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    const double steps = std::llround(config.horizon / config.dt);
    const double burn = std::llround(config.burn_in / config.dt);
    const double span = (steps - burn) * config.dt;
    SimResult r;
    double sum = 0.0, sum2 = 0.0;
    for (const PathTotals& t : totals) {
        const double est = t.cost / span;
        r.path_estimates.push_back(est);
        sum += est;
        sum2 += est * est;
        r.reflect_rate_left += t.left / span;
        r.reflect_or_jump_rate_right += t.right / span;
    }
    const double n = static_cast<double>(totals.size());
    r.estimate = sum / n;
    r.reflect_rate_left /= n;
    r.reflect_or_jump_rate_right /= n;
    r.standard_error = n > 1 ? std::sqrt(std::max(0.0, (sum2 - n * r.estimate * r.estimate) / (n - 1)) / n) : 0.0;
    return r;
}

} // namespace sscfem
