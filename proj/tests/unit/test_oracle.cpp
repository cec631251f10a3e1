#include <doctest.h>

#include "../common/oracles.hpp"
#include "sscfem/oracle.hpp"

#include <cmath>

using namespace sscfem;

TEST_SUITE("oracle") {

TEST_CASE("threshold control") {
    CHECK(threshold_control(0.7512, 0.5) == -1.0);
    CHECK(threshold_control(0.7512, 0.7512) == 1.0);
    for (double x : {0.0, 0.4, 1.0}) {
        CHECK(threshold_control(0.0, x) == 1.0);
    }
}

TEST_CASE("reference table") {
    const BoundedFollowerReference t = reference_table();
    CHECK(t.x0 == 0.1);
    CHECK(t.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t.c1 == 0.01);
    CHECK(t.a == 0.7512);
    CHECK(t.w1 == 2.4659);
    CHECK(t.w2 == 1.5555);
    CHECK(t.cost == 0.1540);
    CHECK(t.cost > 0.0);
    CHECK(t.a > 0.0);
    CHECK(t.a < 1.0);
}

TEST_CASE("density matches the closed form") {
    for (double a : {0.2, 0.7512, 0.95}) {
        for (double sigma : {0.7, std::sqrt(2.0)}) {
            const StationaryDensity p(a, sigma);
            const oracle::ThresholdSolution ref = oracle::threshold_solution(a, sigma);
            CHECK(p.normalizer() == doctest::Approx(ref.normalizer).epsilon(1e-9));
            for (double x : {0.0, 0.1, a - 1e-3, a, 0.99, 1.0}) {
                const double exact = oracle::threshold_density_unnormalized(a, sigma, x) / ref.normalizer;
                CHECK(p(x) == doctest::Approx(exact).epsilon(1e-9).scale(1e-12));
            }
            const SingularWeights w = derived_singular_weights(a, sigma);
            CHECK(w.w1 == doctest::Approx(ref.w1).epsilon(1e-9));
            CHECK(w.w2 == doctest::Approx(ref.w2).epsilon(1e-9));
            CHECK(p.expectation([](double x) { return x * x; }) == doctest::Approx(ref.second_moment).epsilon(1e-9));
        }
    }
}

TEST_CASE("normalization, endpoint and positivity") {
    const StationaryDensity p(0.7512, std::sqrt(2.0));
    CHECK(std::abs(p.mass() - 1.0) <= 1e-8);
    CHECK(p(1.0) == 0.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = i / 1000.0;
        CHECK(p(x) > 0.0);
        CHECK(std::isfinite(p(x)));
    }
    // continuous across the threshold
    CHECK(std::abs(p(0.7512 - 1e-9) - p(0.7512)) <= 1e-7);
}

TEST_CASE("tabulated threshold and weight give the tabulated cost") {
    const BoundedFollowerReference t = reference_table();
    const double j = reference_cost(t.a, t.sigma, t.c1, t.w2);
    CHECK(std::abs(j - t.cost) <= 1e-3);
    const oracle::ThresholdSolution ref = oracle::threshold_solution(t.a, t.sigma);
    CHECK(j == doctest::Approx(ref.second_moment + t.c1 * t.w2).epsilon(1e-9));
}

TEST_CASE("derived weights sit close to the tabulated ones") {
    const BoundedFollowerReference t = reference_table();
    const SingularWeights w = derived_singular_weights(t.a, t.sigma);
    CHECK(std::abs(w.w1 - t.w1) <= 2e-3);
    CHECK(std::abs(w.w2 - t.w2) <= 2e-3);
    // the adjoint flux balance: w1 = w2 - E[u]
    const StationaryDensity p(t.a, t.sigma);
    const double a = t.a;
    const double mean_u = 1.0 - 2.0 * (oracle::simpson([&](double x) { return p(x); }, 0.0, a));
    CHECK(w.w1 == doctest::Approx(w.w2 - mean_u).epsilon(1e-8));
}

TEST_CASE("optimal threshold") {
    const BoundedFollowerReference t = reference_table();
    const double a = optimal_threshold(t.sigma, t.c1);
    CHECK(std::abs(a - t.a) <= 2e-2);
    // scan with the closed form oracle on a 1e-3 grid
    double best_a = 0.0;
    double best = 1e300;
    for (int i = 0; i <= 1000; ++i) {
        const double s = i / 1000.0;
        const oracle::ThresholdSolution ref = oracle::threshold_solution(s, t.sigma, 400);
        const double j = ref.second_moment + t.c1 * ref.w2;
        if (j < best) {
            best = j;
            best_a = s;
        }
    }
    CHECK(std::abs(a - best_a) <= 1.5e-3);
}

}
