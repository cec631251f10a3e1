#pragma once

#include "sscfem/model.hpp"

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace sscfem {

/// Knots e_{-3} < ... < e_{q+3} with e_0 = state_lo and e_q = state_hi. The three phantom
/// knots on each side continue the adjacent boundary spacing.
class KnotGrid {
public:
    /// e_k = lo + (hi - lo) k / 2^level.
    static KnotGrid dyadic(double lo, double hi, int level);

    /// Breakpoints e_0..e_q (strictly increasing, q >= 1); phantom knots are appended.
    static KnotGrid from_breakpoints(std::vector<double> breakpoints);

    /// All knots, phantom ones included; knots()[i] is e_{i-3}.
    std::span<const double> knots() const { return knots_; }
    double knot(int k) const { return knots_[static_cast<std::size_t>(k + 3)]; }
    int intervals() const { return static_cast<int>(knots_.size()) - 7; }
    double lo() const { return knot(0); }
    double hi() const { return knot(intervals()); }

    /// Index i into knots() of the interval [knots()[i], knots()[i+1]) holding x; x == hi maps
    /// to the last interval inside E. Returns -1 outside [knots().front(), knots().back()].
    int interval_of(double x) const;

private:
    explicit KnotGrid(std::vector<double> knots) : knots_(std::move(knots)) {}
    std::vector<double> knots_;
};

/// Normalized cubic B-splines on a KnotGrid, stored in pp-form.
///
/// Function k (0-based) has support [knots()[k], knots()[k+4]] and piece p in 0..3 lives on
/// knot interval k+p as c0 + c1 t + c2 t^2 + c3 t^3 with t = x - knots()[k+p]. Every spline
/// whose support meets the open state interval is included, so size() = q + 3.
class BSplineBasis {
public:
    using Piece = std::array<double, 4>;

    explicit BSplineBasis(KnotGrid grid);

    int size() const { return static_cast<int>(pieces_.size()); }
    const KnotGrid& grid() const { return grid_; }

    /// Derivative of order 0, 1 or 2 of f_k at x. Order > 2 throws InputError.
    double eval(int k, double x, int order = 0) const;
    Jet jet(int k, double x) const;

    /// Jet of f_k given the knot interval index (as returned by interval_of) that contains x.
    Jet jet_on_interval(int k, int interval, double x) const;

    std::pair<double, double> support(int k) const;
    const Piece& piece(int k, int p) const { return pieces_[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]; }

    /// f_k as a TestFunction (keeps a reference to this basis).
    TestFunction function(int k) const;

private:
    KnotGrid grid_;
    std::vector<std::array<Piece, 4>> pieces_;
};

} // namespace sscfem
