#pragma once

#include <array>
#include <functional>

namespace sscfem {

/// 5-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 9.
struct GaussLegendre5 {
    std::array<double, 5> nodes;
    std::array<double, 5> weights;
};

const GaussLegendre5& gauss_legendre5();

/// Integral of f over [a, b] by one 5-point Gauss-Legendre panel.
double gauss5(const std::function<double(double)>& f, double a, double b);

/// Adaptive Simpson quadrature with absolute tolerance `tol` (Richardson-corrected).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

} // namespace sscfem
