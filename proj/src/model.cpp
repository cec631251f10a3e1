#include "sscfem/model.hpp"

#include "sscfem/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sscfem {

namespace {

std::string describe(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double parse_number(std::string_view text, std::string_view context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw InputError("bad number '" + std::string(text) + "' in " + std::string(context));
    }
    return value;
}

void check_boundary(const ControlProblem& p, Side side) {
    const auto& b = p.boundary(side);
    const char* name = side == Side::Left ? "left" : "right";
    switch (b.kind) {
    case BoundaryKind::ReflectRight:
        if (side != Side::Left) {
            throw InputError("reflect-right is only legal at the left endpoint");
        }
        break;
    case BoundaryKind::ReflectLeft:
        if (side != Side::Right) {
            throw InputError("reflect-left is only legal at the right endpoint");
        }
        break;
    case BoundaryKind::JumpTo: {
        const double t = b.target;
        const double opposite = side == Side::Left ? p.state_hi : p.state_lo;
        const bool interior = t > p.state_lo && t < p.state_hi;
        if (!interior && t != opposite) {
            throw InputError(std::string("jump target at the ") + name + " boundary must lie inside E "
                             "or at the opposite endpoint, got " + describe(t));
        }
        break;
    }
    case BoundaryKind::JumpByControl:
        break;
    }
}

} // namespace

void ControlProblem::validate() const {
    if (!(std::isfinite(state_lo) && std::isfinite(state_hi) && state_lo < state_hi)) {
        throw InputError("state interval must satisfy state_lo < state_hi");
    }
    if (!(std::isfinite(control_lo) && std::isfinite(control_hi) && control_lo < control_hi)) {
        throw InputError("control interval must satisfy control_lo < control_hi");
    }
    if (!drift || !diffusion || !running_cost || !singular_cost_left || !singular_cost_right) {
        throw InputError("control problem has an unset coefficient function");
    }
    if (!(discount >= 0.0) || !std::isfinite(discount)) {
        throw InputError("discount must be finite and >= 0");
    }
    if (!in_state_space(start_point)) {
        throw InputError("start point " + describe(start_point) + " outside the state space");
    }
    check_boundary(*this, Side::Left);
    check_boundary(*this, Side::Right);
}

void ControlProblem::check_sampled(std::span<const double> xs, std::span<const double> us) const {
    for (double u : us) {
        for (Side side : {Side::Left, Side::Right}) {
            const double c = singular_cost(side)(u);
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw ModelError("singular cost negative or non-finite at u=" + describe(u));
            }
        }
        for (double x : xs) {
            const double s = diffusion(x, u);
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw ModelError("diffusion must be > 0, got " + describe(s) + " at (x,u)=(" +
                                 describe(x) + "," + describe(u) + ")");
            }
            const double c = running_cost(x, u);
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw ModelError("running cost negative or non-finite at (x,u)=(" + describe(x) + "," +
                                 describe(u) + ")");
            }
        }
    }
}

bool ControlProblem::running_cost_depends_on_control(int samples) const {
    for (int a = 0; a < samples; ++a) {
        const double x = state_lo + (state_hi - state_lo) * a / (samples - 1);
        const double ref = running_cost(x, control_lo);
        for (int b = 1; b < samples; ++b) {
            const double u = control_lo + (control_hi - control_lo) * b / (samples - 1);
            if (std::abs(running_cost(x, u) - ref) > 1e-12 * (1.0 + std::abs(ref))) {
                return true;
            }
        }
    }
    return false;
}

ScaledCosts scaled_costs(const ControlProblem& problem) {
    if (problem.discount == 0.0) {
        return {problem.running_cost, problem.singular_cost_left, problem.singular_cost_right};
    }
    const double inv = 1.0 / problem.discount;
    auto c0 = problem.running_cost;
    auto left = problem.singular_cost_left;
    auto right = problem.singular_cost_right;
    return {[c0, inv](double x, double u) { return c0(x, u) * inv; },
            [left, inv](double u) { return left(u) * inv; },
            [right, inv](double u) { return right(u) * inv; }};
}

double apply_A(const ControlProblem& problem, const TestFunction& f, double x, double u) {
    if (!problem.in_state_space(x)) {
        throw InputError("apply_A: x=" + describe(x) + " outside the state space");
    }
    if (!problem.in_control_space(u)) {
        throw InputError("apply_A: u=" + describe(u) + " outside the control space");
    }
    return generator_value(problem, x, u, Jet{f(x, 0), f(x, 1), f(x, 2)});
}

bool jump_destination(const ControlProblem& problem, Side side, double u, double& destination) {
    const auto& b = problem.boundary(side);
    if (b.kind == BoundaryKind::JumpTo) {
        destination = b.target;
        return true;
    }
    if (b.kind == BoundaryKind::JumpByControl) {
        destination = problem.endpoint(side) + u;
        return problem.in_state_space(destination);
    }
    return false;
}

double apply_B(const ControlProblem& problem, const TestFunction& f, Side side, double u) {
    if (!problem.in_control_space(u)) {
        throw InputError("apply_B: u=" + describe(u) + " outside the control space");
    }
    const double e = problem.endpoint(side);
    const auto& b = problem.boundary(side);
    switch (b.kind) {
    case BoundaryKind::ReflectRight:
        return f(e, 1);
    case BoundaryKind::ReflectLeft:
        return -f(e, 1);
    case BoundaryKind::JumpTo:
        return f(b.target, 0) - f(e, 0);
    case BoundaryKind::JumpByControl: {
        const double dest = e + u;
        if (!problem.in_state_space(dest)) {
            throw InputError("apply_B: jump from " + describe(e) + " by " + describe(u) + " leaves E");
        }
        return f(dest, 0) - f(e, 0);
    }
    }
    return 0.0;
}

double functional_R(const ControlProblem& problem, const TestFunction& f) {
    if (problem.discount == 0.0) {
        return 0.0;
    }
    return -problem.discount * f(problem.start_point, 0);
}

namespace {

struct ParsedCoefficient {
    std::string_view name;
    std::string_view param;
    bool has_param = false;
};

ParsedCoefficient split_coefficient(std::string_view text) {
    ParsedCoefficient out;
    const auto colon = text.find(':');
    out.name = text.substr(0, colon);
    if (colon != std::string_view::npos) {
        out.param = text.substr(colon + 1);
        out.has_param = true;
    }
    return out;
}

} // namespace

CoefficientFn make_coefficient(std::string_view text) {
    const auto s = split_coefficient(text);
    if (s.name == "constant") {
        if (!s.has_param) {
            throw InputError("coefficient 'constant' needs a value, e.g. constant:0.5");
        }
        const double v = parse_number(s.param, "constant coefficient");
        return [v](double, double) { return v; };
    }
    if (s.name == "identity-in-u") {
        const double k = s.has_param ? parse_number(s.param, "identity-in-u scale") : 1.0;
        return [k](double, double u) { return k * u; };
    }
    if (s.name == "x-squared") {
        const double k = s.has_param ? parse_number(s.param, "x-squared scale") : 1.0;
        return [k](double x, double) { return k * x * x; };
    }
    if (s.name == "x2-plus-u2") {
        if (s.has_param) {
            throw InputError("coefficient 'x2-plus-u2' takes no parameter");
        }
        return [](double x, double u) { return x * x + u * u; };
    }
    throw InputError("unknown coefficient '" + std::string(text) + "'");
}

bool coefficient_known(std::string_view text) {
    try {
        (void)make_coefficient(text);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

BoundaryBehavior parse_boundary(std::string_view text) {
    const auto s = split_coefficient(text);
    if (s.name == "reflect-right" && !s.has_param) {
        return BoundaryBehavior::reflect_right();
    }
    if (s.name == "reflect-left" && !s.has_param) {
        return BoundaryBehavior::reflect_left();
    }
    if (s.name == "jump-by-control" && !s.has_param) {
        return BoundaryBehavior::jump_by_control();
    }
    if (s.name == "jump-to" && s.has_param) {
        return BoundaryBehavior::jump_to(parse_number(s.param, "jump-to target"));
    }
    throw InputError("unknown boundary behavior '" + std::string(text) + "'");
}

std::string format_boundary(const BoundaryBehavior& b) {
    switch (b.kind) {
    case BoundaryKind::ReflectRight:
        return "reflect-right";
    case BoundaryKind::ReflectLeft:
        return "reflect-left";
    case BoundaryKind::JumpTo:
        return "jump-to:" + describe(b.target);
    case BoundaryKind::JumpByControl:
        return "jump-by-control";
    }
    return "";
}

ControlProblem bounded_follower(double sigma, double c1, double start_point) {
    ControlProblem p;
    p.state_lo = 0.0;
    p.state_hi = 1.0;
    p.control_lo = -1.0;
    p.control_hi = 1.0;
    p.drift = [](double, double u) { return u; };
    p.diffusion = [sigma](double, double) { return sigma; };
    p.running_cost = [](double x, double) { return x * x; };
    p.singular_cost_left = [](double) { return 0.0; };
    p.singular_cost_right = [c1](double) { return c1; };
    p.discount = 0.0;
    p.start_point = start_point;
    p.boundary_left = BoundaryBehavior::reflect_right();
    p.boundary_right = BoundaryBehavior::jump_to(0.0);
    return p;
}

ControlProblem simple_particle(double sigma, double c1, double start_point) {
    ControlProblem p;
    p.state_lo = -1.0;
    p.state_hi = 1.0;
    p.control_lo = -1.0;
    p.control_hi = 1.0;
    p.drift = [](double, double u) { return u; };
    p.diffusion = [sigma](double, double) { return sigma; };
    p.running_cost = [](double x, double u) { return x * x + u * u; };
    p.singular_cost_left = [c1](double) { return c1; };
    p.singular_cost_right = [c1](double) { return c1; };
    p.discount = 0.0;
    p.start_point = start_point;
    p.boundary_left = BoundaryBehavior::reflect_right();
    p.boundary_right = BoundaryBehavior::reflect_left();
    return p;
}

} // namespace sscfem
