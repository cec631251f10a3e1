#pragma once
// Seeded random LPs shared by the unit and acceptance tests.

#include "oracles.hpp"
#include "sscfem/simplex.hpp"

#include <algorithm>
#include <random>

namespace lp_cases {

using sscfem::SparseMatrix;
using sscfem::StandardLP;

inline StandardLP to_standard(const oracle::DenseLP& d) {
    StandardLP lp;
    lp.c.assign(d.c.data(), d.c.data() + d.c.size());
    lp.A = SparseMatrix::from_dense(d.A);
    lp.b.assign(d.b.data(), d.b.data() + d.b.size());
    lp.G = SparseMatrix::from_dense(d.G);
    lp.h.assign(d.h.data(), d.h.data() + d.h.size());
    return lp;
}

/// Feasible by construction (b = A z0, h >= G z0) and bounded through sum z <= S.
inline oracle::DenseLP random_lp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nvar(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const int n = nvar(rng);
    const int me = std::uniform_int_distribution<int>(0, std::min(4, n))(rng);
    const int mi = std::uniform_int_distribution<int>(1, 2)(rng);
    oracle::DenseLP d;
    d.c.resize(n);
    Eigen::VectorXd z0(n);
    for (int j = 0; j < n; ++j) {
        d.c(j) = unit(rng) < 0.15 ? 0.0 : coef(rng);
        z0(j) = unit(rng) < 0.3 ? 0.0 : 2.0 * unit(rng);
    }
    d.A.resize(me, n);
    for (int i = 0; i < me; ++i) {
        for (int j = 0; j < n; ++j) {
            d.A(i, j) = unit(rng) < 0.2 ? 0.0 : coef(rng);
        }
    }
    if (me >= 2 && unit(rng) < 0.2) {
        d.A.row(me - 1) = 0.5 * d.A.row(0) - d.A.row(1);  // redundant row
    }
    d.b = d.A * z0;
    d.G.resize(mi, n);
    d.h.resize(mi);
    d.G.row(0).setOnes();
    d.h(0) = z0.sum() + (unit(rng) < 0.3 ? 0.0 : 3.0 * unit(rng));
    if (mi == 2) {
        for (int j = 0; j < n; ++j) {
            d.G(1, j) = coef(rng);
        }
        d.h(1) = d.G.row(1).dot(z0) + (unit(rng) < 0.3 ? 0.0 : unit(rng));
    }
    return d;
}

} // namespace lp_cases
