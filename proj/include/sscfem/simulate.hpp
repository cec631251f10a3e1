#pragma once

#include "sscfem/model.hpp"
#include "sscfem/solution.hpp"

#include <cstdint>
#include <vector>

namespace sscfem {

struct SimConfig {
    double dt = 1e-4;
    double horizon = 2e3;
    double burn_in = 10.0;
    int paths = 8;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;  // 0: hardware concurrency

    /// Throws InputError on dt <= 0, burn_in >= horizon, paths < 1 or dt not small against |E|.
    void validate(const ControlProblem& problem) const;
    bool operator==(const SimConfig&) const = default;
};

/// Piecewise constant relaxed feedback: on each cell a discrete distribution over the control
/// points, and at each endpoint the distribution of the singular control.
class FeedbackControl {
public:
    FeedbackControl(std::vector<double> breakpoints, std::vector<double> controls,
                    std::vector<std::vector<double>> cell_weights, std::vector<double> zeta_left,
                    std::vector<double> zeta_right);

    static FeedbackControl from_solution(const MeasureSolution& sol);
    /// The same control value everywhere on E.
    static FeedbackControl constant(double lo, double hi, double u);

    /// Control at state x for a uniform variate v in [0, 1).
    double sample(double x, double v) const;
    double sample_singular(Side side, double v) const;

private:
    static double draw(const std::vector<double>& values, const std::vector<double>& cdf, double v);

    std::vector<double> breakpoints_;
    std::vector<double> controls_;
    std::vector<std::vector<double>> cdf_;  // per cell
    std::vector<double> cdf_left_;
    std::vector<double> cdf_right_;
};

struct SimResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    double reflect_rate_left = 0.0;           // xi increments per unit time at e_l
    double reflect_or_jump_rate_right = 0.0;  // xi increments or jumps per unit time at e_r
    std::vector<double> path_estimates;
};

/// Long-term average cost of the controlled process by Euler-Maruyama with projection at
/// reflecting boundaries and teleportation at jump boundaries. Paths use independent
/// mt19937_64 streams seeded from (seed, path); results do not depend on the thread count.
/// Throws InputError when the problem is discounted.
SimResult simulate_lta(const ControlProblem& problem, const FeedbackControl& control, const SimConfig& config);

} // namespace sscfem
