#include <doctest.h>

#include "../common/oracles.hpp"
#include "sscfem/assembly.hpp"
#include "sscfem/error.hpp"
#include "sscfem/solution.hpp"

#include <cmath>
#include <sstream>

using namespace sscfem;

namespace {

MeasureLayout toy_layout(double width) {
    MeasureLayout l;
    l.breakpoints = {0.0, width};
    l.controls = {-1.0, 1.0};
    return l;
}

struct Solved {
    MeasureLayout layout;
    LPResult result;
    MeasureSolution sol;
};

Solved solve_follower(int level, bool refine = true) {
    const ControlProblem p = bounded_follower(std::sqrt(2.0), 0.01);
    DiscretizationConfig d;
    d.spline_level = level;
    d.density_level = level;
    d.midpoint_refine = refine;
    const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, level));
    Solved s;
    s.layout = build_layout(p, d);
    const DiscreteLP lp = assemble_lp(p, basis, s.layout, 1);
    s.result = solve_discrete(lp, s.layout);
    REQUIRE(s.result.status == LPStatus::Optimal);
    s.sol = extract(s.result, s.layout);
    return s;
}

double reference_density(double x) {
    static const double z = oracle::threshold_solution(0.7512, std::sqrt(2.0)).normalizer;
    return oracle::threshold_density_unnormalized(0.7512, std::sqrt(2.0), x) / z;
}

} // namespace

TEST_SUITE("solution") {

TEST_CASE("single cell inversion") {
    const MeasureLayout l = toy_layout(0.5);
    LPResult r;
    r.status = LPStatus::Optimal;
    r.z = {0.3, 0.7, 0.0, 0.0, 0.2, 0.6};
    r.objective = 0.25;
    const MeasureSolution s = extract(r, l);
    CHECK(s.relaxed_control(0, 0) == doctest::Approx(0.3));
    CHECK(s.relaxed_control(0, 1) == doctest::Approx(0.7));
    CHECK(s.density[0] == doctest::Approx(2.0));
    CHECK(s.left.weight == 0.0);
    CHECK(s.left.zeta == std::vector<double>{0.5, 0.5});
    CHECK(s.right.weight == doctest::Approx(0.8));
    CHECK(s.right.zeta[0] == doctest::Approx(0.25));
    CHECK(s.cost == 0.25);
    CHECK(average_control(s, 0.1) == doctest::Approx(0.4));
}

TEST_CASE("zero mass cells get a uniform control") {
    MeasureLayout l = toy_layout(1.0);
    l.breakpoints = {0.0, 0.5, 1.0};
    LPResult r;
    r.status = LPStatus::Optimal;
    r.z = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const MeasureSolution s = extract(r, l);
    CHECK(average_control(s, 0.2) == doctest::Approx(-1.0));
    CHECK(average_control(s, 0.7) == doctest::Approx(0.0));
    CHECK(s.density_at(1.0) == 0.0);
}

TEST_CASE("extraction needs an optimal result") {
    LPResult r;
    r.status = LPStatus::Infeasible;
    CHECK_THROWS_AS(extract(r, toy_layout(1.0)), StateError);
    r.status = LPStatus::Optimal;
    r.z = {1.0};
    CHECK_THROWS_AS(extract(r, toy_layout(1.0)), InputError);
}

TEST_CASE("L1 distance examples") {
    LPResult r;
    r.status = LPStatus::Optimal;
    r.z = {0.5, 0.5, 0.0, 0.0, 0.0, 0.0};
    const MeasureSolution s = extract(r, toy_layout(1.0));
    CHECK(l1_density_error(s, [](double) { return 0.0; }) == doctest::Approx(1.0));
    CHECK(l1_density_error(s, [&](double x) { return s.density_at(x); }) == 0.0);
    const double cut = 0.25;
    CHECK(l1_density_error(s, [](double x) { return x < 0.25 ? 2.0 : 0.0; }, std::span(&cut, 1)) ==
          doctest::Approx(1.0 * 0.25 + 1.0 * 0.75));
}

TEST_CASE("cost error") {
    CostError e = cost_error(0.154, 0.154);
    CHECK(e.absolute == 0.0);
    CHECK(e.relative == 0.0);
    e = cost_error(0.15400, 0.1540);
    CHECK(e.absolute <= 1e-4);
    e = cost_error(2.0 * 0.3, 0.3);
    CHECK(e.relative == doctest::Approx(1.0));
    e = cost_error(1.0, 0.0);
    CHECK_FALSE(e.relative_defined);
}

TEST_CASE("bounded follower left weight at level 8") {
    const Solved s = solve_follower(8);
    CHECK(std::abs(s.sol.left.weight - 2.4659) <= 1e-3);
}

TEST_CASE("bounded follower control left of the switching point") {
    const Solved s = solve_follower(4);
    CHECK(average_control(s.sol, 0.25) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("bounded follower density error at level 3") {
    const Solved s = solve_follower(3);
    const double cut = 0.7512;
    const double e = l1_density_error(s.sol, reference_density, std::span(&cut, 1));
    CHECK(std::abs(e - 9.082e-2) <= 0.1 * 9.082e-2);
}

TEST_CASE("extracted measures satisfy the constraints") {
    const ControlProblem p = bounded_follower(std::sqrt(2.0), 0.01);
    for (int level = 3; level <= 6; ++level) {
        const Solved s = solve_follower(level);
        const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, level));
        const auto d = constraint_error(p, basis, s.layout, s.sol.density, s.sol.weights());
        double worst = 0.0;
        for (double v : d) {
            worst = std::max(worst, std::abs(v));
        }
        CHECK(worst <= 1e-7);
        CHECK(std::abs(recompute_cost(p, s.sol) - s.sol.cost) <= 1e-9);
    }
}

TEST_CASE("csv layout") {
    LPResult r;
    r.status = LPStatus::Optimal;
    r.z = {0.25, 0.75, 0.0, 0.0, 0.0, 0.0};
    const MeasureSolution s = extract(r, toy_layout(1.0));
    std::ostringstream d, c, a;
    write_density_csv(d, s);
    write_control_csv(c, s);
    write_average_control_csv(a, s);
    CHECK(d.str() == "x_left,x_right,gamma\n0,1,1\n");
    CHECK(c.str() == "x_left,x_right,u_0,u_1,beta_0,beta_1\n0,1,-1,1,0.25,0.75\n");
    CHECK(a.str() == "x_left,x_right,average_control\n0,1,0.5\n");
}

}
