#pragma once
// Reference computations for the tests. Nothing here calls into the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

/// Normalized cubic B-spline on knots t[0..4] by the truncated power divided difference
/// (t4 - t0) * sum_i (t_i - x)_+^3 / prod_{j != i} (t_i - t_j).
inline double truncated_power_bspline(const double* t, double x) {
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        double denom = 1.0;
        for (int j = 0; j < 5; ++j) {
            if (j != i) {
                denom *= t[i] - t[j];
            }
        }
        const double d = std::max(0.0, t[i] - x);
        sum += d * d * d / denom;
    }
    return (t[4] - t[0]) * sum;
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

/// Unnormalized stationary density of dX = u dt + sigma dW on [0, 1], reflected at 0 and sent
/// from 1 to 0, under u = -1 on [0, a) and +1 on [a, 1]. Closed form of
/// int_x^1 exp(-k int_x^y u) dy with k = 2 / sigma^2.
inline double threshold_density_unnormalized(double a, double sigma, double x) {
    const double k = 2.0 / (sigma * sigma);
    if (x >= a) {
        return (1.0 - std::exp(-k * (1.0 - x))) / k;
    }
    const double g = std::exp(k * (a - x));
    return (g - 1.0) / k + g * (1.0 - std::exp(-k * (1.0 - a))) / k;
}

struct ThresholdSolution {
    double normalizer = 0.0;
    double second_moment = 0.0;
    double w1 = 0.0;  // reflection rate at 0
    double w2 = 0.0;  // jump rate at 1
};

inline ThresholdSolution threshold_solution(double a, double sigma, int panels = 20000) {
    auto n = [&](double x) { return threshold_density_unnormalized(a, sigma, x); };
    ThresholdSolution s;
    s.normalizer = simpson(n, 0.0, a, panels) + simpson(n, a, 1.0, panels);
    auto m2 = [&](double x) { return x * x * n(x); };
    s.second_moment = (simpson(m2, 0.0, a, panels) + simpson(m2, a, 1.0, panels)) / s.normalizer;
    s.w2 = 0.5 * sigma * sigma / s.normalizer;
    s.w1 = 0.5 * sigma * sigma * n(0.0) / s.normalizer;
    return s;
}

/// Dense form of min c^T z s.t. A z = b, G z <= h, z >= 0.
struct DenseLP {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
};

struct VertexOptimum {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
    Eigen::VectorXd z;
};

/// Minimum over all basic feasible solutions of the slack form [A 0; G I] (z, s) = (b, h).
/// Only valid for LPs with a bounded feasible region.
inline VertexOptimum enumerate_vertices(const DenseLP& lp, double tol = 1e-9) {
    const int n = static_cast<int>(lp.c.size());
    const int me = static_cast<int>(lp.A.rows());
    const int mi = static_cast<int>(lp.G.rows());
    const int rows = me + mi;
    const int cols = n + mi;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd rhs(rows);
    if (me) {
        M.topLeftCorner(me, n) = lp.A;
        rhs.head(me) = lp.b;
    }
    if (mi) {
        M.bottomLeftCorner(mi, n) = lp.G;
        M.bottomRightCorner(mi, mi).setIdentity();
        rhs.tail(mi) = lp.h;
    }
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
    cost.head(n) = lp.c;

    VertexOptimum best;
    // Every column subset; the support of a vertex has linearly independent columns.
    for (unsigned mask = 0; mask < (1u << cols); ++mask) {
        std::vector<int> idx;
        for (int j = 0; j < cols; ++j) {
            if (mask & (1u << j)) {
                idx.push_back(j);
            }
        }
        if (static_cast<int>(idx.size()) > rows) {
            continue;
        }
        Eigen::MatrixXd S(rows, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            S.col(static_cast<Eigen::Index>(k)) = M.col(idx[k]);
        }
        Eigen::VectorXd y;
        if (idx.empty()) {
            y.resize(0);
            if (rhs.cwiseAbs().maxCoeff() > tol) {
                continue;
            }
        } else {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
            if (lu.rank() < static_cast<Eigen::Index>(idx.size())) {
                continue;
            }
            y = S.colPivHouseholderQr().solve(rhs);
            if ((S * y - rhs).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
                continue;
            }
            if (y.minCoeff() < -tol) {
                continue;
            }
        }
        Eigen::VectorXd full = Eigen::VectorXd::Zero(cols);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            full(idx[k]) = y(static_cast<Eigen::Index>(k));
        }
        const double obj = cost.dot(full);
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.z = full.head(n);
        }
    }
    return best;
}

} // namespace oracle
