#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace sscfem {

enum class Side { Left, Right };

enum class BoundaryKind {
    ReflectRight,  // pushes right, legal only at the left endpoint
    ReflectLeft,   // pushes left, legal only at the right endpoint
    JumpTo,        // fixed, control independent target
    JumpByControl  // endpoint + u
};

struct BoundaryBehavior {
    BoundaryKind kind = BoundaryKind::ReflectRight;
    double target = 0.0;  // JumpTo only

    static BoundaryBehavior reflect_right() { return {BoundaryKind::ReflectRight, 0.0}; }
    static BoundaryBehavior reflect_left() { return {BoundaryKind::ReflectLeft, 0.0}; }
    static BoundaryBehavior jump_to(double t) { return {BoundaryKind::JumpTo, t}; }
    static BoundaryBehavior jump_by_control() { return {BoundaryKind::JumpByControl, 0.0}; }

    bool is_reflection() const {
        return kind == BoundaryKind::ReflectRight || kind == BoundaryKind::ReflectLeft;
    }
    bool operator==(const BoundaryBehavior&) const = default;
};

using CoefficientFn = std::function<double(double x, double u)>;
using ControlCostFn = std::function<double(double u)>;

/// Value and first two derivatives of a test function at one point.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// A test function f evaluated as f(x, order) for order in {0, 1, 2}.
using TestFunction = std::function<double(double x, int order)>;

/// One-dimensional singular control problem on E = [state_lo, state_hi], U = [control_lo, control_hi].
///
/// The continuous generator is b f' + (1/2) sigma^2 f'' and the discounted operator subtracts
/// discount * f. The singular generator is determined per boundary by BoundaryBehavior.
/// A discount of zero selects the long-term average criterion.
struct ControlProblem {
    double state_lo = 0.0;
    double state_hi = 1.0;
    double control_lo = -1.0;
    double control_hi = 1.0;

    CoefficientFn drift;
    CoefficientFn diffusion;
    CoefficientFn running_cost;
    ControlCostFn singular_cost_left;
    ControlCostFn singular_cost_right;

    double discount = 0.0;
    double start_point = 0.0;

    BoundaryBehavior boundary_left = BoundaryBehavior::reflect_right();
    BoundaryBehavior boundary_right = BoundaryBehavior::reflect_left();

    /// Structural checks: intervals, callables present, boundary legality. Throws InputError.
    void validate() const;

    /// Samples diffusion > 0 and nonnegative costs on the tensor grid xs x us. Throws ModelError.
    void check_sampled(std::span<const double> xs, std::span<const double> us) const;

    /// True when the running cost varies with u on a coarse sample grid.
    bool running_cost_depends_on_control(int samples = 9) const;

    double endpoint(Side side) const { return side == Side::Left ? state_lo : state_hi; }
    const BoundaryBehavior& boundary(Side side) const {
        return side == Side::Left ? boundary_left : boundary_right;
    }
    const ControlCostFn& singular_cost(Side side) const {
        return side == Side::Left ? singular_cost_left : singular_cost_right;
    }
    bool in_state_space(double x) const { return x >= state_lo && x <= state_hi; }
    bool in_control_space(double u) const { return u >= control_lo && u <= control_hi; }
};

/// Costs entering the LP objective: raw costs for the average criterion, raw/alpha when discounted.
struct ScaledCosts {
    CoefficientFn c0;
    ControlCostFn c1_left;
    ControlCostFn c1_right;

    const ControlCostFn& c1(Side side) const { return side == Side::Left ? c1_left : c1_right; }
};

ScaledCosts scaled_costs(const ControlProblem& problem);

/// A f(x,u) from the jet of f at x. No domain checks; used on hot paths.
inline double generator_value(const ControlProblem& problem, double x, double u, const Jet& f) {
    const double s = problem.diffusion(x, u);
    return problem.drift(x, u) * f.d1 + 0.5 * s * s * f.d2 - problem.discount * f.value;
}

double apply_A(const ControlProblem& problem, const TestFunction& f, double x, double u);

/// Singular generator at the endpoint on `side`. Throws InputError when a jump leaves E.
double apply_B(const ControlProblem& problem, const TestFunction& f, Side side, double u);

/// Where the singular part at `side` sends the state for control u, if it is a jump.
/// Returns false for reflections and for jumps that would leave E.
bool jump_destination(const ControlProblem& problem, Side side, double u, double& destination);

/// R f = -alpha f(x0).
double functional_R(const ControlProblem& problem, const TestFunction& f);

// Builtin coefficient registry. Names are "name" or "name:parameter":
//   constant:v      -> v
//   identity-in-u   -> u (parameter scales it)
//   x-squared       -> x^2
//   x2-plus-u2      -> x^2 + u^2
CoefficientFn make_coefficient(std::string_view text);
bool coefficient_known(std::string_view text);

/// Parses "reflect-right", "reflect-left", "jump-to:<t>", "jump-by-control".
BoundaryBehavior parse_boundary(std::string_view text);
std::string format_boundary(const BoundaryBehavior& b);

/// Reflection at 0, jump 1 -> 0, b = u, constant sigma, c0 = x^2, c1 = c1 at the right endpoint only.
ControlProblem bounded_follower(double sigma, double c1, double start_point = 0.1);

/// Reflection at both ends of [-1, 1], b = u, constant sigma, c0 = x^2 + u^2, c1 at both ends.
ControlProblem simple_particle(double sigma, double c1, double start_point = 0.0);

} // namespace sscfem
