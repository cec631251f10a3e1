#include "sscfem/config.hpp"

#include "sscfem/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sscfem {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view what) {
    throw ConfigError(std::string(key) + ": " + std::string(what) + " (got '" + std::string(value) + "')");
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out)) {
        bad(key, v, "expected a finite number");
    }
    return out;
}

long to_long(std::string_view key, std::string_view v) {
    long out = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) {
        bad(key, v, "expected an integer");
    }
    return out;
}

int to_int(std::string_view key, std::string_view v) {
    const long x = to_long(key, v);
    if (x < -1000000 || x > 1000000) {
        bad(key, v, "integer out of range");
    }
    return static_cast<int>(x);
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    bad(key, v, "expected true or false");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::pair<int, int> parse_range(std::string_view text) {
    text = trim(text);
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        const int v = to_int("sweep", text);
        return {v, v};
    }
    return {to_int("sweep", trim(text.substr(0, dots))), to_int("sweep", trim(text.substr(dots + 2)))};
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    const std::string v(value);
    if (key == "problem") {
        c.problem = v;
    } else if (key == "sigma") {
        c.sigma = to_double(key, value);
    } else if (key == "c1") {
        c.c1 = to_double(key, value);
    } else if (key == "alpha") {
        c.alpha = to_double(key, value);
    } else if (key == "x0") {
        c.x0 = to_double(key, value);
    } else if (key == "state_lo") {
        c.state_lo = to_double(key, value);
    } else if (key == "state_hi") {
        c.state_hi = to_double(key, value);
    } else if (key == "control_lo") {
        c.control_lo = to_double(key, value);
    } else if (key == "control_hi") {
        c.control_hi = to_double(key, value);
    } else if (key == "drift") {
        c.drift = v;
    } else if (key == "diffusion") {
        c.diffusion = v;
    } else if (key == "running_cost") {
        c.running_cost = v;
    } else if (key == "singular_cost_left") {
        c.singular_cost_left = v;
    } else if (key == "singular_cost_right") {
        c.singular_cost_right = v;
    } else if (key == "boundary_left") {
        c.boundary_left = v;
    } else if (key == "boundary_right") {
        c.boundary_right = v;
    } else if (key == "n_level") {
        c.n_level = to_int(key, value);
    } else if (key == "m") {
        c.m = to_int(key, value);
    } else if (key == "k_m") {
        c.k_m = to_int(key, value);
    } else if (key == "l") {
        c.l = to_double(key, value);
    } else if (key == "refine_midpoint") {
        c.refine_midpoint = to_bool(key, value);
    } else if (key == "sweep") {
        c.sweep = parse_range(value);
    } else if (key == "outdir") {
        c.outdir = v;
    } else if (key == "oracle") {
        c.oracle = to_bool(key, value);
    } else if (key == "mc") {
        c.mc = to_bool(key, value);
    } else if (key == "mc.dt") {
        c.sim.dt = to_double(key, value);
    } else if (key == "mc.horizon") {
        c.sim.horizon = to_double(key, value);
    } else if (key == "mc.burn_in") {
        c.sim.burn_in = to_double(key, value);
    } else if (key == "mc.paths") {
        c.sim.paths = to_int(key, value);
    } else if (key == "mc.seed") {
        const long s = to_long(key, value);
        if (s < 0) {
            bad(key, value, "expected a nonnegative integer");
        }
        c.sim.seed = static_cast<std::uint64_t>(s);
    } else if (key == "mc.threads") {
        const int t = to_int(key, value);
        if (t < 0) {
            bad(key, value, "expected a nonnegative integer");
        }
        c.sim.threads = static_cast<unsigned>(t);
    } else if (key == "repetitions") {
        c.repetitions = to_int(key, value);
    } else if (key == "threads") {
        const int t = to_int(key, value);
        if (t < 0) {
            bad(key, value, "expected a nonnegative integer");
        }
        c.threads = static_cast<unsigned>(t);
    } else if (key == "quiet") {
        c.quiet = to_bool(key, value);
    } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set_config_value(c, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&](const char* k, const std::string& v) { out << k << " = " << v << '\n'; };
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    kv("problem", c.problem);
    if (c.sigma) {
        kv("sigma", fmt(*c.sigma));
    }
    if (c.c1) {
        kv("c1", fmt(*c.c1));
    }
    kv("alpha", fmt(c.alpha));
    if (c.x0) {
        kv("x0", fmt(*c.x0));
    }
    kv("state_lo", fmt(c.state_lo));
    kv("state_hi", fmt(c.state_hi));
    kv("control_lo", fmt(c.control_lo));
    kv("control_hi", fmt(c.control_hi));
    kv("drift", c.drift);
    kv("diffusion", c.diffusion);
    kv("running_cost", c.running_cost);
    kv("singular_cost_left", c.singular_cost_left);
    kv("singular_cost_right", c.singular_cost_right);
    kv("boundary_left", c.boundary_left);
    kv("boundary_right", c.boundary_right);
    kv("n_level", std::to_string(c.n_level));
    kv("m", std::to_string(c.m));
    if (c.k_m) {
        kv("k_m", std::to_string(*c.k_m));
    }
    kv("l", fmt(c.l));
    if (c.refine_midpoint) {
        kv("refine_midpoint", flag(*c.refine_midpoint));
    }
    if (c.sweep) {
        kv("sweep", std::to_string(c.sweep->first) + ".." + std::to_string(c.sweep->second));
    }
    kv("outdir", c.outdir);
    kv("oracle", flag(c.oracle));
    kv("mc", flag(c.mc));
    kv("mc.dt", fmt(c.sim.dt));
    kv("mc.horizon", fmt(c.sim.horizon));
    kv("mc.burn_in", fmt(c.sim.burn_in));
    kv("mc.paths", std::to_string(c.sim.paths));
    kv("mc.seed", std::to_string(c.sim.seed));
    kv("mc.threads", std::to_string(c.sim.threads));
    kv("repetitions", std::to_string(c.repetitions));
    kv("threads", std::to_string(c.threads));
    kv("quiet", flag(c.quiet));
    return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Diagnostic::Severity::Error) {
            return true;
        }
    }
    return false;
}

std::vector<Diagnostic> validate_config(const RunConfig& c) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string msg) { out.push_back({Diagnostic::Severity::Error, std::move(msg)}); };
    auto warn = [&](std::string msg) { out.push_back({Diagnostic::Severity::Warning, std::move(msg)}); };

    const bool preset = c.problem == "bounded-follower" || c.problem == "simple-particle";
    if (!preset && c.problem != "custom") {
        error("unknown problem '" + c.problem + "' (expected bounded-follower, simple-particle or custom)");
        return out;
    }
    if (c.sigma && !(*c.sigma > 0.0)) {
        error("sigma must be > 0");
    }
    if (c.c1 && !(*c.c1 >= 0.0)) {
        error("c1 must be >= 0");
    }
    if (!(c.alpha >= 0.0)) {
        error("alpha must be >= 0");
    }
    if (c.n_level < 1 || c.n_level > 14) {
        error("n_level must be in [1, 14]");
    }
    if (c.m < 1 || c.m > 16) {
        error("m must be in [1, 16]");
    }
    if (c.k_m && (*c.k_m < 0 || *c.k_m > 16)) {
        error("k_m must be in [0, 16]");
    }
    if (!(c.l > 0.0)) {
        error("l must be > 0");
    }
    if (c.sweep) {
        const auto [a, b] = *c.sweep;
        if (a > b) {
            error("sweep range " + std::to_string(a) + ".." + std::to_string(b) + " is empty");
        } else if (a < 1 || b > 14) {
            error("sweep levels must lie in [1, 14]");
        }
    }
    if (c.repetitions < 1) {
        error("repetitions must be >= 1");
    }
    if (c.outdir.empty()) {
        error("outdir must not be empty");
    }
    if (c.oracle && c.problem != "bounded-follower") {
        error("oracle comparison is only available for the bounded-follower problem");
    }
    if (c.mc) {
        if (c.alpha > 0.0) {
            error("mc simulation requires alpha = 0");
        }
        if (!(c.sim.dt > 0.0)) {
            error("mc.dt must be > 0");
        }
        if (!(c.sim.burn_in >= 0.0 && c.sim.burn_in < c.sim.horizon)) {
            error("mc.burn_in must lie in [0, mc.horizon)");
        }
        if (c.sim.paths < 1) {
            error("mc.paths must be >= 1");
        }
    }
    if (has_errors(out)) {
        return out;
    }

    ControlProblem problem;
    try {
        problem = make_problem(c);
        problem.validate();
    } catch (const Error& e) {
        error(e.what());
        return out;
    }
    const bool u_dependent = problem.running_cost_depends_on_control();
    if (c.k_m && *c.k_m == 0 && u_dependent) {
        warn("k_m = 0 while the running cost depends on u; the usual choice is k_m = m + 3");
    }
    return out;
}

ControlProblem make_problem(const RunConfig& c) {
    ControlProblem p;
    if (c.problem == "bounded-follower") {
        p = bounded_follower(c.sigma.value_or(std::sqrt(2.0)), c.c1.value_or(0.01), c.x0.value_or(0.1));
    } else if (c.problem == "simple-particle") {
        p = simple_particle(c.sigma.value_or(std::sqrt(2.0) / 2.0), c.c1.value_or(1.0), c.x0.value_or(0.0));
    } else if (c.problem == "custom") {
        p.state_lo = c.state_lo;
        p.state_hi = c.state_hi;
        p.control_lo = c.control_lo;
        p.control_hi = c.control_hi;
        p.drift = make_coefficient(c.drift);
        p.diffusion = make_coefficient(c.diffusion);
        p.running_cost = make_coefficient(c.running_cost);
        const CoefficientFn left = make_coefficient(c.singular_cost_left);
        const CoefficientFn right = make_coefficient(c.singular_cost_right);
        const double lo = c.state_lo;
        const double hi = c.state_hi;
        p.singular_cost_left = [left, lo](double u) { return left(lo, u); };
        p.singular_cost_right = [right, hi](double u) { return right(hi, u); };
        p.boundary_left = parse_boundary(c.boundary_left);
        p.boundary_right = parse_boundary(c.boundary_right);
        p.start_point = c.x0.value_or(c.state_lo);
        if (c.sigma) {
            p.diffusion = [s = *c.sigma](double, double) { return s; };
        }
        if (c.c1) {
            p.singular_cost_left = [v = *c.c1](double) { return v; };
            p.singular_cost_right = [v = *c.c1](double) { return v; };
        }
    } else {
        throw ConfigError("unknown problem '" + c.problem + "'");
    }
    p.discount = c.alpha;
    return p;
}

std::vector<DiscretizationConfig> discretizations(const RunConfig& c) {
    const ControlProblem problem = make_problem(c);
    const bool refine = c.refine_midpoint.value_or(c.problem == "bounded-follower");
    std::vector<std::pair<int, int>> levels;
    if (c.sweep) {
        for (int i = c.sweep->first; i <= c.sweep->second; ++i) {
            levels.emplace_back(i, i);
        }
    } else {
        levels.emplace_back(c.n_level, c.m);
    }
    std::vector<DiscretizationConfig> out;
    for (const auto& [n, m] : levels) {
        DiscretizationConfig d;
        d.spline_level = n;
        d.density_level = m;
        d.control_level = c.k_m.value_or(default_control_level(problem, m));
        d.mass_bound = c.l;
        d.midpoint_refine = refine;
        out.push_back(d);
    }
    return out;
}

} // namespace sscfem
