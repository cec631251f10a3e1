#include <doctest.h>

#include "../common/oracles.hpp"
#include "sscfem/error.hpp"
#include "sscfem/splines.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace sscfem;

TEST_SUITE("splines") {

TEST_CASE("closed form value at the central knot") {
    const BSplineBasis basis(KnotGrid::from_breakpoints({0.0, 1.0, 2.0, 3.0, 4.0}));
    // spline with support [0, 4] is the one starting at knots()[3] = e_0
    const int k = 3;
    CHECK(basis.support(k).first == 0.0);
    CHECK(basis.support(k).second == 4.0);
    const double t[5] = {0.0, 1.0, 2.0, 3.0, 4.0};
    const double direct = oracle::truncated_power_bspline(t, 2.0);
    CHECK(direct == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(basis.eval(k, 2.0) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("pp-form matches truncated powers on a nonuniform grid") {
    const BSplineBasis basis(KnotGrid::from_breakpoints({0.0, 0.1, 0.35, 0.5, 0.9, 1.0}));
    const auto knots = basis.grid().knots();
    std::mt19937_64 rng(3);
    for (int k = 0; k < basis.size(); ++k) {
        const double* t = knots.data() + k;
        std::uniform_real_distribution<double> in(t[0], t[4]);
        for (int s = 0; s < 50; ++s) {
            const double x = in(rng);
            CHECK(basis.eval(k, x) == doctest::Approx(oracle::truncated_power_bspline(t, x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("compact support") {
    const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, 3));
    for (int k = 0; k < basis.size(); ++k) {
        const auto [a, b] = basis.support(k);
        for (double x : {a - 0.3, a - 1e-9, b + 1e-9, b + 0.2}) {
            for (int order = 0; order <= 2; ++order) {
                CHECK(basis.eval(k, x, order) == 0.0);
            }
        }
    }
    CHECK_THROWS_AS(basis.eval(0, 0.5, 3), InputError);
}

TEST_CASE("basis size and partition of unity") {
    std::mt19937_64 rng(11);
    for (int level = 0; level <= 6; ++level) {
        const BSplineBasis basis(KnotGrid::dyadic(-1.0, 2.0, level));
        CHECK(basis.size() == (1 << level) + 3);
        std::uniform_real_distribution<double> in(-1.0, 2.0);
        for (int s = 0; s < 100; ++s) {
            const double x = s == 0 ? -1.0 : s == 1 ? 2.0 : in(rng);
            double sum = 0.0;
            for (int k = 0; k < basis.size(); ++k) {
                sum += basis.eval(k, x);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("C2 continuity at every knot") {
    const BSplineBasis basis(KnotGrid::from_breakpoints({0.0, 0.2, 0.25, 0.6, 0.61, 1.0}));
    const auto knots = basis.grid().knots();
    for (int k = 0; k < basis.size(); ++k) {
        // pieces p and p+1 meet at knots()[k+p+1]; outer ends meet the zero function
        for (int p = -1; p < 4; ++p) {
            const double e = knots[static_cast<std::size_t>(k + p + 1)];
            for (int order = 0; order <= 2; ++order) {
                auto eval_piece = [&](int q) {
                    if (q < 0 || q > 3) {
                        return 0.0;
                    }
                    const auto& c = basis.piece(k, q);
                    const double t = e - knots[static_cast<std::size_t>(k + q)];
                    switch (order) {
                    case 0:
                        return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
                    case 1:
                        return c[1] + t * (2.0 * c[2] + 3.0 * t * c[3]);
                    default:
                        return 2.0 * c[2] + 6.0 * t * c[3];
                    }
                };
                CHECK(std::abs(eval_piece(p) - eval_piece(p + 1)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("derivatives against finite differences") {
    const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, 3));
    const auto knots = basis.grid().knots();
    const double h = 1e-5;
    for (int k = 0; k < basis.size(); ++k) {
        // first derivative at the interior knots of the support
        for (int p = 1; p <= 3; ++p) {
            const double x = knots[static_cast<std::size_t>(k + p)];
            const double fd = (basis.eval(k, x + h) - basis.eval(k, x - h)) / (2.0 * h);
            const double exact = basis.eval(k, x, 1);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
        // second derivative at the support midpoint from first derivatives; the midpoint is a knot
        // where the third derivative jumps, so the step is small against the support
        const auto [a, b] = basis.support(k);
        const double mid = 0.5 * (a + b);
        const double h2 = 1e-7 * (b - a);
        const double fd2 = (basis.eval(k, mid + h2, 1) - basis.eval(k, mid - h2, 1)) / (2.0 * h2);
        CHECK(std::abs(fd2 - basis.eval(k, mid, 2)) <= 1e-5 * std::abs(basis.eval(k, mid, 2)));
    }
}

TEST_CASE("jets agree with eval") {
    const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, 2));
    for (int k = 0; k < basis.size(); ++k) {
        for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
            const Jet j = basis.jet(k, x);
            CHECK(j.value == doctest::Approx(basis.eval(k, x, 0)));
            CHECK(j.d1 == doctest::Approx(basis.eval(k, x, 1)));
            CHECK(j.d2 == doctest::Approx(basis.eval(k, x, 2)));
            const auto f = basis.function(k);
            CHECK(f(x, 1) == doctest::Approx(j.d1));
        }
    }
}

TEST_CASE("nonnegativity") {
    const BSplineBasis basis(KnotGrid::dyadic(0.0, 1.0, 4));
    std::mt19937_64 rng(5);
    for (int k = 0; k < basis.size(); ++k) {
        const auto [a, b] = basis.support(k);
        std::uniform_real_distribution<double> in(a, b);
        for (int s = 0; s < 1000; ++s) {
            CHECK(basis.eval(k, in(rng)) >= 0.0);
        }
    }
}

TEST_CASE("refinement nesting") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int level = 1; level <= 5; ++level) {
        const BSplineBasis coarse(KnotGrid::dyadic(0.0, 1.0, level));
        const BSplineBasis fine(KnotGrid::dyadic(0.0, 1.0, level + 1));
        const int samples = 8 * fine.size();
        Eigen::MatrixXd M(samples, fine.size());
        Eigen::VectorXd y(samples);
        Eigen::VectorXd c(coarse.size());
        for (int k = 0; k < coarse.size(); ++k) {
            c(k) = coef(rng);
        }
        for (int s = 0; s < samples; ++s) {
            const double x = (s + 0.5) / samples;
            for (int k = 0; k < fine.size(); ++k) {
                M(s, k) = fine.eval(k, x);
            }
            double v = 0.0;
            for (int k = 0; k < coarse.size(); ++k) {
                v += c(k) * coarse.eval(k, x);
            }
            y(s) = v;
        }
        const Eigen::VectorXd d = M.colPivHouseholderQr().solve(y);
        CHECK((M * d - y).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("knot grid validation") {
    CHECK_THROWS_AS(KnotGrid::from_breakpoints({0.0}), InputError);
    CHECK_THROWS_AS(KnotGrid::from_breakpoints({0.0, 0.5, 0.5, 1.0}), InputError);
    const KnotGrid g = KnotGrid::dyadic(0.0, 1.0, 2);
    CHECK(g.knot(-3) == doctest::Approx(-0.75));
    CHECK(g.knot(7) == doctest::Approx(1.75));
    CHECK(g.interval_of(1.0) == g.intervals() + 2);
    CHECK(g.interval_of(-5.0) == -1);
}

}
