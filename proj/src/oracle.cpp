#include "sscfem/oracle.hpp"

#include "sscfem/error.hpp"
#include "sscfem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace sscfem {

BoundedFollowerReference reference_table() { return {}; }

double threshold_control(double a, double x) { return x < a ? -1.0 : 1.0; }

namespace {

// int_x^y u_a(z) dz for x <= y.
double control_integral(double a, double x, double y) {
    const double below = std::max(0.0, std::min(y, a) - x);
    const double above = std::max(0.0, y - std::max(x, a));
    return above - below;
}

} // namespace

StationaryDensity::StationaryDensity(double a, double sigma, double tol) : a_(a), sigma_(sigma), tol_(tol) {
    if (!(sigma > 0.0)) {
        throw InputError("sigma must be > 0");
    }
    normalizer_ = 1.0;
    const auto n = [this](double x) { return numerator(x); };
    const double cut = std::clamp(a_, 0.0, 1.0);
    normalizer_ = adaptive_simpson(n, 0.0, cut, tol_) + adaptive_simpson(n, cut, 1.0, tol_);
}

double StationaryDensity::numerator(double x) const {
    if (x >= 1.0) {
        return 0.0;
    }
    const double k = 2.0 / (sigma_ * sigma_);
    const auto inner = [&](double y) { return std::exp(-k * control_integral(a_, x, y)); };
    const double cut = std::clamp(a_, x, 1.0);
    return adaptive_simpson(inner, x, cut, 0.1 * tol_) + adaptive_simpson(inner, cut, 1.0, 0.1 * tol_);
}

double StationaryDensity::jump_weight() const { return 0.5 * sigma_ * sigma_ / normalizer_; }

double StationaryDensity::reflection_weight() const { return 0.5 * sigma_ * sigma_ * (*this)(0.0); }

double StationaryDensity::expectation(double (*g)(double)) const {
    const auto f = [&](double x) { return g(x) * (*this)(x); };
    const double cut = std::clamp(a_, 0.0, 1.0);
    return adaptive_simpson(f, 0.0, cut, tol_) + adaptive_simpson(f, cut, 1.0, tol_);
}

double StationaryDensity::mass() const {
    return expectation([](double) { return 1.0; });
}

double reference_cost(double a, double sigma, double c1, double w2) {
    const StationaryDensity p(a, sigma);
    return p.expectation([](double x) { return x * x; }) + c1 * w2;
}

SingularWeights derived_singular_weights(double a, double sigma) {
    const StationaryDensity p(a, sigma);
    return {p.reflection_weight(), p.jump_weight()};
}

double optimal_threshold(double sigma, double c1, double tol) {
    const auto cost = [&](double a) {
        const StationaryDensity p(a, sigma);
        return p.expectation([](double x) { return x * x; }) + c1 * p.jump_weight();
    };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 1.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cost(x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace sscfem
