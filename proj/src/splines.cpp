#include "sscfem/splines.hpp"

#include "sscfem/error.hpp"

#include <algorithm>
#include <cmath>

namespace sscfem {

KnotGrid KnotGrid::dyadic(double lo, double hi, int level) {
    if (level < 0 || level > 30) {
        throw InputError("dyadic knot level must be in [0, 30]");
    }
    if (!(lo < hi)) {
        throw InputError("dyadic knot grid needs lo < hi");
    }
    const long q = 1L << level;
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(q + 7));
    for (long k = -3; k <= q + 3; ++k) {
        knots.push_back(k == q ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(q));
    }
    return KnotGrid(std::move(knots));
}

KnotGrid KnotGrid::from_breakpoints(std::vector<double> breakpoints) {
    if (breakpoints.size() < 2) {
        throw InputError("knot grid needs at least two breakpoints");
    }
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1]) || !std::isfinite(breakpoints[i + 1])) {
            throw InputError("knot breakpoints must be finite and strictly increasing");
        }
    }
    const double left_h = breakpoints[1] - breakpoints[0];
    const double right_h = breakpoints.back() - breakpoints[breakpoints.size() - 2];
    std::vector<double> knots;
    knots.reserve(breakpoints.size() + 6);
    for (int k = 3; k >= 1; --k) {
        knots.push_back(breakpoints.front() - k * left_h);
    }
    knots.insert(knots.end(), breakpoints.begin(), breakpoints.end());
    const double last = breakpoints.back();
    for (int k = 1; k <= 3; ++k) {
        knots.push_back(last + k * right_h);
    }
    return KnotGrid(std::move(knots));
}

int KnotGrid::interval_of(double x) const {
    if (!(x >= knots_.front() && x <= knots_.back())) {
        return -1;
    }
    if (x == hi()) {
        return intervals() + 2;  // [e_{q-1}, e_q]
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const int idx = static_cast<int>(it - knots_.begin()) - 1;
    return std::min(idx, static_cast<int>(knots_.size()) - 2);
}

namespace {

using Poly = std::array<double, 4>;

// (a + t) * p(t), truncated to degree 3 (the recursion never exceeds it).
Poly mul_linear(double a, double b, const Poly& p) {
    // (a + b t) * p
    Poly out{};
    for (int i = 0; i < 4; ++i) {
        out[static_cast<std::size_t>(i)] += a * p[static_cast<std::size_t>(i)];
        if (i + 1 < 4) {
            out[static_cast<std::size_t>(i + 1)] += b * p[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

} // namespace

BSplineBasis::BSplineBasis(KnotGrid grid) : grid_(std::move(grid)) {
    const auto t = grid_.knots();
    const int nk = static_cast<int>(t.size());
    const int count = grid_.intervals() + 3;
    for (int i = 0; i + 1 < nk; ++i) {
        if (!(t[static_cast<std::size_t>(i)] < t[static_cast<std::size_t>(i + 1)])) {
            throw InputError("degenerate knot grid: knots must be strictly increasing");
        }
    }
    pieces_.assign(static_cast<std::size_t>(count), {});

    // Cox-de Boor recursion carried out on polynomials in the local variable of each interval.
    for (int j = 0; j + 1 < nk; ++j) {
        const double left = t[static_cast<std::size_t>(j)];
        // b[i] holds B_{i,p} restricted to interval j, for i = j-p..j.
        std::vector<Poly> b(static_cast<std::size_t>(nk), Poly{});
        b[static_cast<std::size_t>(j)] = Poly{1.0, 0.0, 0.0, 0.0};
        for (int p = 1; p <= 3; ++p) {
            std::vector<Poly> next(static_cast<std::size_t>(nk), Poly{});
            for (int i = std::max(0, j - p); i <= j && i + p + 1 < nk; ++i) {
                Poly acc{};
                const double ti = t[static_cast<std::size_t>(i)];
                const double tip = t[static_cast<std::size_t>(i + p)];
                const double ti1 = t[static_cast<std::size_t>(i + 1)];
                const double tip1 = t[static_cast<std::size_t>(i + p + 1)];
                // (x - t_i)/(t_{i+p} - t_i) * B_{i,p-1}
                const auto lhs = mul_linear((left - ti) / (tip - ti), 1.0 / (tip - ti), b[static_cast<std::size_t>(i)]);
                // (t_{i+p+1} - x)/(t_{i+p+1} - t_{i+1}) * B_{i+1,p-1}
                const auto rhs = mul_linear((tip1 - left) / (tip1 - ti1), -1.0 / (tip1 - ti1),
                                            b[static_cast<std::size_t>(i + 1)]);
                for (std::size_t c = 0; c < 4; ++c) {
                    acc[c] = lhs[c] + rhs[c];
                }
                next[static_cast<std::size_t>(i)] = acc;
            }
            b = std::move(next);
        }
        for (int i = std::max(0, j - 3); i <= j; ++i) {
            if (i < count) {
                pieces_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)] = b[static_cast<std::size_t>(i)];
            }
        }
    }
}

std::pair<double, double> BSplineBasis::support(int k) const {
    const auto t = grid_.knots();
    return {t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>(k + 4)]};
}

Jet BSplineBasis::jet_on_interval(int k, int interval, double x) const {
    const int p = interval - k;
    if (p < 0 || p > 3) {
        return {};
    }
    const auto& c = piece(k, p);
    const double s = x - grid_.knots()[static_cast<std::size_t>(interval)];
    return {c[0] + s * (c[1] + s * (c[2] + s * c[3])),
            c[1] + s * (2.0 * c[2] + s * 3.0 * c[3]),
            2.0 * c[2] + 6.0 * s * c[3]};
}

Jet BSplineBasis::jet(int k, double x) const {
    if (k < 0 || k >= size()) {
        throw InputError("spline index out of range");
    }
    const auto [a, b] = support(k);
    if (x < a || x > b) {
        return {};
    }
    int iv = grid_.interval_of(x);
    // Right support end: use the last piece (all derivatives through order 2 vanish there).
    iv = std::clamp(iv, k, k + 3);
    return jet_on_interval(k, iv, x);
}

double BSplineBasis::eval(int k, double x, int order) const {
    if (order < 0 || order > 2) {
        throw InputError("spline derivative order must be 0, 1 or 2");
    }
    const Jet j = jet(k, x);
    return order == 0 ? j.value : (order == 1 ? j.d1 : j.d2);
}

TestFunction BSplineBasis::function(int k) const {
    return [this, k](double x, int order) { return eval(k, x, order); };
}

} // namespace sscfem
