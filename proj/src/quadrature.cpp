#include "sscfem/quadrature.hpp"

#include <cmath>

namespace sscfem {

const GaussLegendre5& gauss_legendre5() {
    static const GaussLegendre5 rule = [] {
        const double r = 2.0 * std::sqrt(10.0 / 7.0);
        const double inner = std::sqrt(5.0 - r) / 3.0;
        const double outer = std::sqrt(5.0 + r) / 3.0;
        const double s70 = std::sqrt(70.0);
        const double w_inner = (322.0 + 13.0 * s70) / 900.0;
        const double w_outer = (322.0 - 13.0 * s70) / 900.0;
        return GaussLegendre5{{-outer, -inner, 0.0, inner, outer},
                              {w_outer, w_inner, 128.0 / 225.0, w_inner, w_outer}};
    }();
    return rule;
}

double gauss5(const std::function<double(double)>& f, double a, double b) {
    const auto& g = gauss_legendre5();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < 5; ++q) {
        sum += g.weights[q] * f(mid + half * g.nodes[q]);
    }
    return sum * half;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth, int level) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || (level >= 3 && std::abs(delta) <= 15.0 * tol)) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, level + 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, level + 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a == b) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, 0);
}

} // namespace sscfem
