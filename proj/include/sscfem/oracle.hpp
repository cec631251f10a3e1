#pragma once

namespace sscfem {

/// Configuration and analytic solution of the modified bounded follower.
struct BoundedFollowerReference {
    double x0 = 0.1;
    double sigma = 1.4142135623730951;
    double c1 = 0.01;
    double a = 0.7512;
    double w1 = 2.4659;
    double w2 = 1.5555;
    double cost = 0.1540;
};

BoundedFollowerReference reference_table();

/// -1 for x < a, +1 for x >= a.
double threshold_control(double a, double x);

/// Stationary density of the follower under the threshold control u_a:
/// p_a(x) = N(x) / Z with N(x) = int_x^1 exp(-(2/sigma^2) int_x^y u_a(z) dz) dy.
class StationaryDensity {
public:
    StationaryDensity(double a, double sigma, double tol = 1e-10);

    double operator()(double x) const { return numerator(x) / normalizer_; }
    double numerator(double x) const;
    double normalizer() const { return normalizer_; }
    double a() const { return a_; }
    double sigma() const { return sigma_; }

    /// Weights of the singular measure implied by the adjoint boundary conditions:
    /// w2 = sigma^2 / (2 Z) (jump rate at 1), w1 = sigma^2 p_a(0) / 2 (reflection at 0).
    double jump_weight() const;
    double reflection_weight() const;

    /// int_0^1 g(x) p_a(x) dx, split at a.
    double expectation(double (*g)(double)) const;
    double mass() const;

private:
    double a_;
    double sigma_;
    double tol_;
    double normalizer_ = 1.0;
};

/// int x^2 p_a dx + c1 * w2.
double reference_cost(double a, double sigma, double c1, double w2);

struct SingularWeights {
    double w1 = 0.0;
    double w2 = 0.0;
};

SingularWeights derived_singular_weights(double a, double sigma);

/// Minimizer over a in [0, 1] of int x^2 p_a dx + c1 * sigma^2 / (2 Z(a)), by golden-section search.
double optimal_threshold(double sigma, double c1, double tol = 1e-7);

} // namespace sscfem
