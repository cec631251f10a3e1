#include <doctest.h>

#include "sscfem/config.hpp"
#include "sscfem/error.hpp"

#include <random>

using namespace sscfem;

namespace {

bool has_warning(const std::vector<Diagnostic>& d) {
    for (const auto& x : d) {
        if (x.severity == Diagnostic::Severity::Warning) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("parse the documented keys") {
    const RunConfig c = parse_config(
        "# bounded follower\n"
        "problem = bounded-follower\n"
        "sigma = 1.5   # inline comment\n"
        "c1=0.02\n"
        "\n"
        "n_level = 5\n"
        "m = 6\n"
        "k_m = 1\n"
        "l = 4\n"
        "refine_midpoint = false\n"
        "sweep = 3..8\n"
        "outdir = results\n"
        "oracle = true\n"
        "mc = yes\n"
        "mc.seed = 17\n"
        "mc.paths = 3\n"
        "repetitions = 1\n");
    CHECK(c.sigma == 1.5);
    CHECK(c.c1 == 0.02);
    CHECK(c.n_level == 5);
    CHECK(c.m == 6);
    CHECK(c.k_m == 1);
    CHECK(c.l == 4.0);
    CHECK(c.refine_midpoint == false);
    CHECK(c.sweep == std::pair<int, int>{3, 8});
    CHECK(c.outdir == "results");
    CHECK(c.oracle);
    CHECK(c.mc);
    CHECK(c.sim.seed == 17);
    CHECK(c.sim.paths == 3);
    CHECK(c.repetitions == 1);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_config("sigma 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("oracle = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep = 3-8\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path/run.cfg"), ConfigError);
    CHECK(parse_range("2..4") == std::pair<int, int>{2, 4});
}

TEST_CASE("round trip") {
    RunConfig c;
    CHECK(parse_config(serialize_config(c)) == c);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> real(0.001, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        RunConfig r;
        r.problem = trial % 3 == 0 ? "custom" : trial % 3 == 1 ? "simple-particle" : "bounded-follower";
        if (trial % 2) {
            r.sigma = real(rng);
            r.c1 = real(rng) / 7.0;
            r.x0 = 0.1 * real(rng);
            r.k_m = trial % 5;
            r.refine_midpoint = trial % 4 == 1;
            r.sweep = std::pair<int, int>{1 + trial % 3, 5};
        }
        r.alpha = real(rng) / 3.0;
        r.l = real(rng) * 10.0;
        r.drift = "constant:" + std::to_string(real(rng));
        r.boundary_right = "jump-to:0.25";
        r.outdir = "out/run" + std::to_string(trial);
        r.oracle = trial % 2 == 0;
        r.sim.dt = real(rng) * 1e-4;
        r.sim.seed = rng();
        r.sim.seed >>= 2;
        r.repetitions = 1 + trial;
        r.quiet = trial % 3 == 0;
        CHECK(parse_config(serialize_config(r)) == r);
    }
}

TEST_CASE("diagnostics") {
    RunConfig c;
    CHECK(validate_config(c).empty());
    c.problem = "simple-particle";
    CHECK(validate_config(c).empty());

    c.k_m = 0;
    const auto w = validate_config(c);
    CHECK(has_warning(w));
    CHECK_FALSE(has_errors(w));
    REQUIRE(!w.empty());
    CHECK(w.front().message.find("k_m") != std::string::npos);

    RunConfig e;
    e.sweep = std::pair<int, int>{5, 3};
    CHECK(has_errors(validate_config(e)));
    e = RunConfig{};
    e.problem = "pendulum";
    CHECK(has_errors(validate_config(e)));
    e = RunConfig{};
    e.problem = "simple-particle";
    e.oracle = true;
    CHECK(has_errors(validate_config(e)));
    e = RunConfig{};
    e.problem = "custom";
    e.diffusion = "sin";
    CHECK(has_errors(validate_config(e)));
    e = RunConfig{};
    e.mc = true;
    e.alpha = 0.1;
    CHECK(has_errors(validate_config(e)));
}

TEST_CASE("presets and discretizations") {
    RunConfig c;
    const ControlProblem bf = make_problem(c);
    CHECK(bf.boundary_right == BoundaryBehavior::jump_to(0.0));
    CHECK(bf.start_point == 0.1);
    auto d = discretizations(c);
    REQUIRE(d.size() == 1);
    CHECK(d[0].midpoint_refine);
    CHECK(d[0].control_level == 0);

    c.problem = "simple-particle";
    c.m = 9;
    c.n_level = 9;
    d = discretizations(c);
    CHECK_FALSE(d[0].midpoint_refine);
    CHECK(d[0].control_level == 12);
    CHECK(make_problem(c).diffusion(0.0, 0.0) == doctest::Approx(std::sqrt(0.5)));

    c.sweep = std::pair<int, int>{3, 5};
    d = discretizations(c);
    REQUIRE(d.size() == 3);
    CHECK(d[2].spline_level == 5);
    CHECK(d[2].density_level == 5);
}

}
