#include <doctest.h>

#include "sscfem/sscfem.h"

#include <cmath>
#include <string>
#include <vector>

namespace {

struct Config {
    ssc_config* handle = nullptr;
    ~Config() { ssc_config_destroy(handle); }
};

struct Solution {
    ssc_solution* handle = nullptr;
    ~Solution() { ssc_solution_destroy(handle); }
};

} // namespace

TEST_SUITE("capi") {

TEST_CASE("config lifecycle") {
    Config c;
    REQUIRE(ssc_config_create(&c.handle) == SSC_OK);
    CHECK(ssc_config_set(c.handle, "n_level", "4") == SSC_OK);
    CHECK(ssc_config_set(c.handle, "colour", "blue") == SSC_ERR_CONFIG);
    CHECK(std::string(ssc_last_error()).find("colour") != std::string::npos);
    CHECK(ssc_config_set(c.handle, "m", "4") == SSC_OK);
    CHECK(std::string(ssc_last_error()).empty());

    size_t needed = 0;
    REQUIRE(ssc_config_serialize(c.handle, nullptr, 0, &needed) == SSC_OK);
    std::vector<char> buf(needed);
    REQUIRE(ssc_config_serialize(c.handle, buf.data(), buf.size(), &needed) == SSC_OK);
    const std::string text(buf.data());
    CHECK(text.size() + 1 == needed);
    CHECK(text.find("n_level = 4") != std::string::npos);

    Config back;
    REQUIRE(ssc_config_parse(text.c_str(), &back.handle) == SSC_OK);
    std::vector<char> buf2(needed);
    REQUIRE(ssc_config_serialize(back.handle, buf2.data(), buf2.size(), nullptr) == SSC_OK);
    CHECK(std::string(buf2.data()) == text);

    // truncation keeps the terminator
    char small[8];
    REQUIRE(ssc_config_serialize(c.handle, small, sizeof small, &needed) == SSC_OK);
    CHECK(std::string(small) == text.substr(0, 7));
}

TEST_CASE("validation through the C interface") {
    Config c;
    REQUIRE(ssc_config_parse("problem = simple-particle\nk_m = 0\nsweep = 5..3\n", &c.handle) == SSC_OK);
    char buf[512];
    int errors = -1;
    REQUIRE(ssc_config_validate(c.handle, buf, sizeof buf, nullptr, &errors) == SSC_OK);
    CHECK(errors == 1);
    CHECK(std::string(buf).find("error: ") != std::string::npos);
}

TEST_CASE("argument errors") {
    CHECK(ssc_config_create(nullptr) == SSC_ERR_INVALID_ARGUMENT);
    CHECK(ssc_config_set(nullptr, "m", "3") == SSC_ERR_INVALID_ARGUMENT);
    ssc_config* cfg = reinterpret_cast<ssc_config*>(0x1);
    CHECK(ssc_config_load("/nonexistent/run.cfg", &cfg) == SSC_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(ssc_config_parse("m = three\n", &cfg) == SSC_ERR_CONFIG);
    double v = 0.0;
    CHECK(ssc_solution_cost(nullptr, &v) == SSC_ERR_INVALID_ARGUMENT);
    ssc_solution_destroy(nullptr);
    ssc_config_destroy(nullptr);
    CHECK(std::string(ssc_status_name(SSC_ERR_STATE)) == "state");
    CHECK(std::string(ssc_version()).size() > 0);
}

TEST_CASE("solve and query") {
    Config c;
    REQUIRE(ssc_config_parse("problem = bounded-follower\nn_level = 5\nm = 5\n", &c.handle) == SSC_OK);
    Solution s;
    REQUIRE(ssc_solve(c.handle, &s.handle) == SSC_OK);
    const char* status = nullptr;
    REQUIRE(ssc_solution_status(s.handle, &status) == SSC_OK);
    CHECK(std::string(status) == "optimal");
    double j = 0.0;
    REQUIRE(ssc_solution_cost(s.handle, &j) == SSC_OK);
    CHECK(std::abs(j - 0.154) < 1e-3);
    double w1 = 0.0, w2 = 0.0;
    REQUIRE(ssc_solution_weights(s.handle, &w1, &w2) == SSC_OK);
    CHECK(std::abs(w1 - 2.4659) < 2e-2);
    size_t cells = 0;
    REQUIRE(ssc_solution_cells(s.handle, &cells) == SSC_OK);
    CHECK(cells == 33);
    std::vector<double> x(cells + 1), g(cells);
    CHECK(ssc_solution_density(s.handle, x.data(), g.data(), cells - 1) == SSC_ERR_INVALID_ARGUMENT);
    REQUIRE(ssc_solution_density(s.handle, x.data(), g.data(), cells) == SSC_OK);
    double mass = 0.0;
    for (size_t i = 0; i < cells; ++i) {
        mass += g[i] * (x[i + 1] - x[i]);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    double u = 0.0;
    REQUIRE(ssc_solution_average_control(s.handle, 0.25, &u) == SSC_OK);
    CHECK(u == doctest::Approx(-1.0));
    CHECK(ssc_solution_average_control(s.handle, 2.0, &u) == SSC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("solve rejects invalid configurations") {
    Config c;
    REQUIRE(ssc_config_parse("problem = custom\ndiffusion = constant:0\n", &c.handle) == SSC_OK);
    Solution s;
    CHECK(ssc_solve(c.handle, &s.handle) == SSC_ERR_MODEL);
    CHECK(s.handle == nullptr);
}

}
