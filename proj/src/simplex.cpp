#include "sscfem/simplex.hpp"

#include "sscfem/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sscfem {

std::string to_string(LPStatus status) {
    switch (status) {
    case LPStatus::Optimal:
        return "optimal";
    case LPStatus::Infeasible:
        return "infeasible";
    case LPStatus::Unbounded:
        return "unbounded";
    case LPStatus::IterationLimit:
        return "iteration_limit";
    case LPStatus::NumericalFailure:
        return "numerical_failure";
    }
    return "unknown";
}

void StandardLP::validate() const {
    const std::size_t n = c.size();
    if (A.rows() != b.size() || G.rows() != h.size()) {
        throw InputError("LP: right-hand side length does not match row count");
    }
    if ((A.rows() > 0 && A.cols() != n) || (G.rows() > 0 && G.cols() != n)) {
        throw InputError("LP: constraint column count does not match objective length");
    }
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(c) || !finite(b) || !finite(h)) {
        throw InputError("LP: non-finite objective or right-hand side");
    }
    for (const SparseMatrix* m : {&A, &G}) {
        for (std::size_t j = 0; j < m->cols(); ++j) {
            for (double v : m->column_values(j)) {
                if (!std::isfinite(v)) {
                    throw InputError("LP: non-finite matrix entry");
                }
            }
        }
    }
}

std::vector<double> reduced_costs(const StandardLP& lp, const std::vector<double>& dual) {
    const std::size_t me = lp.A.rows();
    std::vector<double> d(lp.c);
    std::span<const double> ye(dual.data(), me);
    std::span<const double> yg(dual.data() + me, lp.G.rows());
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (me > 0) {
            d[j] -= lp.A.column_dot(j, ye);
        }
        if (lp.G.rows() > 0) {
            d[j] -= lp.G.column_dot(j, yg);
        }
    }
    return d;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelPivot = 1e-11;

double pow2_round(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        return 1.0;
    }
    int e = 0;
    std::frexp(s, &e);
    return std::ldexp(1.0, e - 1);
}

class RevisedSimplex {
public:
    RevisedSimplex(const StandardLP& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {
        me_ = lp.A.rows();
        mi_ = lp.G.rows();
        m_ = me_ + mi_;
        n_ = lp.variables();
        total_ = n_ + mi_;
        build_scaled();
        max_iters_ = opt.max_iters > 0
                         ? opt.max_iters
                         : std::min<long>(10'000'000L, 50L * static_cast<long>(m_ + total_) + 1000);
        stall_threshold_ = opt.stall_threshold > 0 ? opt.stall_threshold
                                                    : std::max<long>(100, static_cast<long>(m_));
        chunk_ = opt.pricing_chunk > 0 ? opt.pricing_chunk
                                       : (total_ <= 8000 ? total_ : std::max<std::size_t>(8000, total_ / 24));
    }

    LPResult run(std::span<const std::size_t> warm);

private:
    // Variable j: [0, n) structural, [n, n+mi) slack, [total, total+m) artificial.
    bool is_artificial(std::size_t j) const { return j >= total_; }

    void build_scaled();
    void perturb();
    bool restore();
    void initial_basis();
    bool warm_start(std::span<const std::size_t> warm);
    void shift_rhs(std::size_t j);
    bool refactor();
    Eigen::MatrixXd basis_matrix() const;
    void repair(const Eigen::MatrixXd& basis);
    void compute_duals(std::vector<double>& y) const;
    double reduced_cost(std::size_t j, const std::vector<double>& y) const;
    bool price(const std::vector<double>& y, bool bland, std::size_t& entering);
    void ftran(std::size_t j, Eigen::VectorXd& alpha) const;
    void pivot(std::size_t row, std::size_t entering, const Eigen::VectorXd& alpha, double theta);
    double phase_objective() const;

    enum class PhaseEnd { Optimal, Unbounded, IterationLimit, Numerical };
    PhaseEnd iterate();
    PhaseEnd cold_phase_one();

    const StandardLP& lp_;
    SolveOptions opt_;
    std::size_t me_ = 0, mi_ = 0, m_ = 0, n_ = 0, total_ = 0;

    SparseMatrix w_;                   // scaled [A; G] plus slack columns
    std::vector<double> row_scale_;    // r_i
    std::vector<double> col_scale_;    // s_j, slack columns included
    std::vector<double> cost_;         // scaled phase II cost over structural + slack
    std::vector<double> rhs_;          // scaled b, h (perturbed while iterating)
    std::vector<double> rhs_orig_;
    std::vector<double> col_weight_;   // pricing normalization
    std::vector<double> art_sign_;     // artificial r has column art_sign_[r] * e_r

    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    std::vector<std::size_t> head_;
    std::vector<long> pos_;            // row of basic variable, -1 when nonbasic

    bool phase_one_ = true;
    long iterations_ = 0;
    long phase_one_iterations_ = 0;
    long max_iters_ = 0;
    long stall_threshold_ = 0;
    std::size_t chunk_ = 0;
    std::size_t cursor_ = 0;
    int since_refactor_ = 0;
    int repairs_ = 0;
    static constexpr int kMaxRepairs = 20;
};

void RevisedSimplex::build_scaled() {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(total_, 1.0);

    auto for_each_entry = [&](std::size_t j, auto&& fn) {
        if (me_ > 0) {
            const auto r = lp_.A.column_rows(j);
            const auto v = lp_.A.column_values(j);
            for (std::size_t e = 0; e < r.size(); ++e) {
                fn(static_cast<std::size_t>(r[e]), v[e]);
            }
        }
        if (mi_ > 0) {
            const auto r = lp_.G.column_rows(j);
            const auto v = lp_.G.column_values(j);
            for (std::size_t e = 0; e < r.size(); ++e) {
                fn(me_ + r[e], v[e]);
            }
        }
    };

    if (opt_.scale) {
        std::vector<double> rmax(m_), rmin(m_);
        for (int pass = 0; pass < 6; ++pass) {
            const bool rows_pass = pass % 2 == 0;
            if (rows_pass) {
                std::fill(rmax.begin(), rmax.end(), 0.0);
                std::fill(rmin.begin(), rmin.end(), kInf);
            }
            for (std::size_t j = 0; j < n_; ++j) {
                double cmax = 0.0, cmin = kInf;
                for_each_entry(j, [&](std::size_t i, double v) {
                    const double a = std::abs(v) * row_scale_[i] * col_scale_[j];
                    if (a == 0.0) {
                        return;
                    }
                    if (rows_pass) {
                        rmax[i] = std::max(rmax[i], a);
                        rmin[i] = std::min(rmin[i], a);
                    } else {
                        cmax = std::max(cmax, a);
                        cmin = std::min(cmin, a);
                    }
                });
                if (!rows_pass && cmax > 0.0) {
                    col_scale_[j] *= pow2_round(1.0 / std::sqrt(cmax * std::max(cmin, 1e-6 * cmax)));
                }
            }
            if (rows_pass) {
                for (std::size_t i = 0; i < m_; ++i) {
                    if (rmax[i] > 0.0) {
                        row_scale_[i] *= pow2_round(1.0 / std::sqrt(rmax[i] * std::max(rmin[i], 1e-6 * rmax[i])));
                    }
                }
            }
        }
        // Final column equilibration to unit max.
        for (std::size_t j = 0; j < n_; ++j) {
            double cmax = 0.0;
            for_each_entry(j, [&](std::size_t i, double v) {
                cmax = std::max(cmax, std::abs(v) * row_scale_[i] * col_scale_[j]);
            });
            if (cmax > 0.0) {
                col_scale_[j] *= pow2_round(1.0 / cmax);
            }
        }
    }
    for (std::size_t i = 0; i < mi_; ++i) {
        col_scale_[n_ + i] = 1.0 / row_scale_[me_ + i];
    }

    std::size_t nnz = lp_.A.nonzeros() + lp_.G.nonzeros() + mi_;
    w_ = SparseMatrix(m_);
    w_.reserve(total_, nnz);
    col_weight_.assign(total_, 1.0);
    for (std::size_t j = 0; j < n_; ++j) {
        w_.add_column();
        double norm2 = 0.0;
        for_each_entry(j, [&](std::size_t i, double v) {
            const double a = v * row_scale_[i] * col_scale_[j];
            w_.push(static_cast<std::uint32_t>(i), a);
            norm2 += a * a;
        });
        col_weight_[j] = std::sqrt(1.0 + norm2);
    }
    for (std::size_t i = 0; i < mi_; ++i) {
        w_.add_column();
        w_.push(static_cast<std::uint32_t>(me_ + i), 1.0);
        col_weight_[n_ + i] = std::sqrt(2.0);
    }

    cost_.assign(total_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        cost_[j] = lp_.c[j] * col_scale_[j];
    }
    rhs_.resize(m_);
    for (std::size_t i = 0; i < me_; ++i) {
        rhs_[i] = lp_.b[i] * row_scale_[i];
    }
    for (std::size_t i = 0; i < mi_; ++i) {
        rhs_[me_ + i] = lp_.h[i] * row_scale_[me_ + i];
    }
}

void RevisedSimplex::shift_rhs(std::size_t j) {
    // z_j >= -eps_j is the substitution z' = z + eps, i.e. rhs += eps_j W_j.
    std::uint64_t h = (j + 1) * 0x9E3779B97F4A7C15ULL;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    h ^= h >> 31;
    const double eps = opt_.perturbation * (1.0 + static_cast<double>(h >> 11) * 0x1.0p-53);
    const auto rows = w_.column_rows(j);
    const auto vals = w_.column_values(j);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        rhs_[rows[e]] += eps * vals[e];
    }
}

void RevisedSimplex::perturb() {
    if (!(opt_.perturbation > 0.0)) {
        return;
    }
    for (std::size_t j = 0; j < total_; ++j) {
        shift_rhs(j);
    }
}

bool RevisedSimplex::warm_start(std::span<const std::size_t> warm) {
    std::vector<std::size_t> vars;
    std::vector<char> seen(total_, 0);
    for (std::size_t v : warm) {
        if (v < total_ && !seen[v]) {
            seen[v] = 1;
            vars.push_back(v);
        }
    }
    if (vars.empty() || vars.size() > m_) {
        return false;
    }
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(vars.size()));
    for (std::size_t c = 0; c < vars.size(); ++c) {
        const auto rows = w_.column_rows(vars[c]);
        const auto vals = w_.column_values(vars[c]);
        for (std::size_t e = 0; e < rows.size(); ++e) {
            cols(rows[e], static_cast<Eigen::Index>(c)) = vals[e];
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cols);
    lu.setThreshold(1e-10);
    const auto rank = lu.rank();
    const auto& p = lu.permutationP().indices();
    const auto& q = lu.permutationQ().indices();
    std::vector<Eigen::Index> row_at(m_);
    for (Eigen::Index i = 0; i < m; ++i) {
        row_at[static_cast<std::size_t>(p[i])] = i;
    }

    head_.assign(m_, 0);
    pos_.assign(total_ + m_, -1);
    art_sign_.assign(m_, 1.0);
    for (Eigen::Index k = 0; k < m; ++k) {
        const std::size_t var = k < rank ? vars[static_cast<std::size_t>(q[k])]
                                         : total_ + static_cast<std::size_t>(row_at[static_cast<std::size_t>(k)]);
        head_[static_cast<std::size_t>(k)] = var;
        pos_[var] = k;
    }
    if (opt_.perturbation > 0.0) {
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial(head_[r])) {
                shift_rhs(head_[r]);
            }
        }
    }
    if (!refactor()) {
        return false;
    }
    const double tol = opt_.feasibility_tol;
    for (std::size_t r = 0; r < m_; ++r) {
        const double x = xb_[static_cast<Eigen::Index>(r)];
        if (is_artificial(head_[r]) ? std::abs(x) > tol : x < -tol) {
            return false;
        }
    }
    return true;
}

bool RevisedSimplex::restore() {
    rhs_ = rhs_orig_;
    if (!refactor()) {
        return false;
    }
    const double tol = opt_.feasibility_tol;
    for (std::size_t r = 0; r < m_; ++r) {
        const double x = xb_[static_cast<Eigen::Index>(r)];
        if (is_artificial(head_[r]) ? std::abs(x) > tol : x < -tol) {
            return false;
        }
    }
    return true;
}

void RevisedSimplex::initial_basis() {
    head_.assign(m_, 0);
    pos_.assign(total_ + m_, -1);
    art_sign_.assign(m_, 1.0);
    binv_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    xb_.resize(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
        std::size_t var = total_ + r;
        double sign = rhs_[r] < 0.0 ? -1.0 : 1.0;
        if (r >= me_ && rhs_[r] >= 0.0) {
            var = n_ + (r - me_);  // slack starts basic
            sign = 1.0;
        }
        art_sign_[r] = rhs_[r] < 0.0 ? -1.0 : 1.0;
        head_[r] = var;
        pos_[var] = static_cast<long>(r);
        binv_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = 1.0 / sign;
        xb_[static_cast<Eigen::Index>(r)] = std::abs(rhs_[r]);
    }
}

Eigen::MatrixXd RevisedSimplex::basis_matrix() const {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t var = head_[r];
        const auto col = static_cast<Eigen::Index>(r);
        if (is_artificial(var)) {
            const std::size_t row = var - total_;
            basis(static_cast<Eigen::Index>(row), col) = art_sign_[row];
        } else {
            const auto rows = w_.column_rows(var);
            const auto vals = w_.column_values(var);
            for (std::size_t e = 0; e < rows.size(); ++e) {
                basis(rows[e], col) += vals[e];
            }
        }
    }
    return basis;
}

void RevisedSimplex::repair(const Eigen::MatrixXd& basis) {
    // Swap dependent basic columns for the artificials of the rows they leave uncovered.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    lu.setThreshold(1e-11);
    const auto rank = lu.rank();
    const auto m = static_cast<Eigen::Index>(m_);
    const auto& q = lu.permutationQ().indices();
    const auto& p = lu.permutationP().indices();
    std::vector<Eigen::Index> row_at(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        row_at[static_cast<std::size_t>(p[i])] = i;
    }
    for (Eigen::Index k = rank; k < m; ++k) {
        const auto pos = static_cast<std::size_t>(q[k]);
        const auto row = row_at[static_cast<std::size_t>(k)];
        const std::size_t art = total_ + static_cast<std::size_t>(row);
        if (pos_[art] >= 0) {
            continue;
        }
        pos_[head_[pos]] = -1;
        head_[pos] = art;
        pos_[art] = static_cast<long>(pos);
    }
    ++repairs_;
}

bool RevisedSimplex::refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd basis = basis_matrix();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-13)) {
        if (repairs_ >= kMaxRepairs) {
            return false;
        }
        repair(basis);
        basis = basis_matrix();
        lu.compute(basis);
    }
    binv_ = lu.inverse();
    if (!binv_.allFinite()) {
        return false;
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(rhs_.data(), m);
    xb_ = binv_ * rhs;
    // One step of iterative refinement on the basic solution.
    const Eigen::VectorXd resid = rhs - basis * xb_;
    xb_ += binv_ * resid;
    since_refactor_ = 0;
    return xb_.allFinite();
}

void RevisedSimplex::compute_duals(std::vector<double>& y) const {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::VectorXd cb(m);
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t var = head_[r];
        double c = 0.0;
        if (phase_one_) {
            c = is_artificial(var) ? 1.0 : 0.0;
        } else if (!is_artificial(var)) {
            c = cost_[var];
        }
        cb[static_cast<Eigen::Index>(r)] = c;
    }
    Eigen::VectorXd yv = binv_.transpose() * cb;
    y.assign(yv.data(), yv.data() + m);
}

double RevisedSimplex::reduced_cost(std::size_t j, const std::vector<double>& y) const {
    const double c = phase_one_ ? 0.0 : cost_[j];
    return c - w_.column_dot(j, y);
}

bool RevisedSimplex::price(const std::vector<double>& y, bool bland, std::size_t& entering) {
    const double tol = opt_.optimality_tol;
    if (bland) {
        for (std::size_t j = 0; j < total_; ++j) {
            if (pos_[j] < 0 && reduced_cost(j, y) < -tol) {
                entering = j;
                return true;
            }
        }
        return false;
    }
    if (total_ == 0) {
        return false;
    }
    std::size_t scanned = 0;
    std::size_t j = cursor_ % total_;
    while (scanned < total_) {
        const std::size_t block = std::min(chunk_, total_ - scanned);
        double best = 0.0;
        std::size_t best_j = total_;
        for (std::size_t k = 0; k < block; ++k, ++j) {
            if (j == total_) {
                j = 0;
            }
            if (pos_[j] >= 0) {
                continue;
            }
            const double d = reduced_cost(j, y);
            if (d < -tol) {
                const double score = d / col_weight_[j];
                if (score < best) {
                    best = score;
                    best_j = j;
                }
            }
        }
        scanned += block;
        if (best_j != total_) {
            entering = best_j;
            cursor_ = j;
            return true;
        }
    }
    return false;
}

void RevisedSimplex::ftran(std::size_t j, Eigen::VectorXd& alpha) const {
    alpha.setZero(static_cast<Eigen::Index>(m_));
    const auto rows = w_.column_rows(j);
    const auto vals = w_.column_values(j);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        alpha.noalias() += vals[e] * binv_.col(rows[e]);
    }
}

void RevisedSimplex::pivot(std::size_t row, std::size_t entering, const Eigen::VectorXd& alpha, double theta) {
    const auto r = static_cast<Eigen::Index>(row);
    xb_.noalias() -= theta * alpha;
    xb_[r] = theta;

    const double piv = alpha[r];
    binv_.row(r) /= piv;
    Eigen::VectorXd a = alpha;
    a[r] = 0.0;
    const Eigen::RowVectorXd prow = binv_.row(r);
    binv_.noalias() -= a * prow;

    const std::size_t leaving = head_[row];
    pos_[leaving] = -1;
    head_[row] = entering;
    pos_[entering] = static_cast<long>(row);
    ++since_refactor_;
}

double RevisedSimplex::phase_objective() const {
    double obj = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t var = head_[r];
        const double x = xb_[static_cast<Eigen::Index>(r)];
        if (phase_one_) {
            obj += is_artificial(var) ? x : 0.0;
        } else if (!is_artificial(var)) {
            obj += cost_[var] * x;
        }
    }
    return obj;
}

RevisedSimplex::PhaseEnd RevisedSimplex::iterate() {
    std::vector<double> y;
    Eigen::VectorXd alpha;
    bool bland = false;
    long stall = 0;
    double best_obj = phase_objective();
    const double ftol = opt_.feasibility_tol * 0.1;
    bool verified = false;

    for (;;) {
        if (iterations_ >= max_iters_) {
            return PhaseEnd::IterationLimit;
        }
        if (since_refactor_ >= opt_.refactor_interval) {
            if (!refactor()) {
                return PhaseEnd::Numerical;
            }
        }
        compute_duals(y);
        std::size_t q = 0;
        if (!price(y, bland, q)) {
            if (since_refactor_ > 0 && !verified) {
                // Confirm optimality on a fresh factorization.
                if (!refactor()) {
                    return PhaseEnd::Numerical;
                }
                verified = true;
                continue;
            }
            return PhaseEnd::Optimal;
        }
        verified = false;
        ftran(q, alpha);

        // Harris two-pass ratio test. Artificials basic in phase II are fixed at zero and
        // block movement in both directions.
        const double ptol = std::max(opt_.pivot_tol, kRelPivot * alpha.cwiseAbs().maxCoeff());
        double theta_max = kInf;
        for (std::size_t r = 0; r < m_; ++r) {
            const double a = alpha[static_cast<Eigen::Index>(r)];
            const double x = xb_[static_cast<Eigen::Index>(r)];
            const bool boxed = !phase_one_ && is_artificial(head_[r]);
            if (a > ptol) {
                theta_max = std::min(theta_max, (std::max(x, 0.0) + ftol) / a);
            } else if (boxed && a < -ptol) {
                theta_max = std::min(theta_max, (std::max(-x, 0.0) + ftol) / -a);
            }
        }
        if (theta_max == kInf) {
            if (phase_one_) {
                return PhaseEnd::Numerical;
            }
            return PhaseEnd::Unbounded;
        }
        std::size_t leave = m_;
        double leave_mag = 0.0;
        double theta = 0.0;
        double bland_ratio = kInf;
        for (std::size_t r = 0; r < m_; ++r) {
            const double a = alpha[static_cast<Eigen::Index>(r)];
            const double x = xb_[static_cast<Eigen::Index>(r)];
            const bool boxed = !phase_one_ && is_artificial(head_[r]);
            double room = 0.0;
            double mag = 0.0;
            if (a > ptol) {
                room = std::max(x, 0.0);
                mag = a;
            } else if (boxed && a < -ptol) {
                room = std::max(-x, 0.0);
                mag = -a;
            } else {
                continue;
            }
            const double ratio = room / mag;
            if (bland) {
                const bool better = ratio < bland_ratio - 1e-12 ||
                                    (ratio <= bland_ratio + 1e-12 && (leave == m_ || head_[r] < head_[leave]));
                if (better) {
                    bland_ratio = std::min(bland_ratio, ratio);
                    leave = r;
                    theta = ratio;
                }
            } else if (ratio <= theta_max && mag > leave_mag) {
                leave = r;
                leave_mag = mag;
                theta = ratio;
            }
        }
        if (leave == m_) {
            return PhaseEnd::Numerical;
        }
        pivot(leave, q, alpha, theta);
        ++iterations_;
        if (phase_one_) {
            ++phase_one_iterations_;
        }

        const double obj = phase_objective();
        if (obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
            best_obj = obj;
            stall = 0;
            bland = false;
        } else if (++stall > stall_threshold_) {
            bland = true;
        }
    }
}

RevisedSimplex::PhaseEnd RevisedSimplex::cold_phase_one() {
    perturb();
    initial_basis();
    since_refactor_ = 0;
    phase_one_ = true;
    return iterate();
}

LPResult RevisedSimplex::run(std::span<const std::size_t> warm) {
    LPResult result;
    if (m_ == 0) {
        // Only bounds: optimal at zero unless some cost is negative.
        result.z.assign(n_, 0.0);
        const bool unbounded = std::any_of(lp_.c.begin(), lp_.c.end(), [](double c) { return c < 0.0; });
        result.status = unbounded ? LPStatus::Unbounded : LPStatus::Optimal;
        return result;
    }
    rhs_orig_ = rhs_;
    bool warm_ok = false;
    if (!warm.empty()) {
        warm_ok = warm_start(warm);
        phase_one_ = !warm_ok;
        if (!warm_ok) {
            rhs_ = rhs_orig_;
            repairs_ = 0;
        }
    }
    const PhaseEnd p1 = warm_ok ? PhaseEnd::Optimal : cold_phase_one();
    if (p1 == PhaseEnd::IterationLimit) {
        result.status = LPStatus::IterationLimit;
    } else if (p1 == PhaseEnd::Numerical) {
        result.status = LPStatus::NumericalFailure;
    }
    if (p1 != PhaseEnd::Optimal) {
        result.iterations = iterations_;
        result.phase_one_iterations = phase_one_iterations_;
        return result;
    }
    double bnorm = 0.0;
    for (double v : rhs_orig_) {
        bnorm = std::max(bnorm, std::abs(v));
    }
    if (phase_one_ && phase_objective() > opt_.feasibility_tol * (1.0 + bnorm)) {
        result.status = LPStatus::Infeasible;
        result.iterations = iterations_;
        result.phase_one_iterations = phase_one_iterations_;
        return result;
    }

    phase_one_ = false;
    const PhaseEnd p2 = iterate();
    result.iterations = iterations_;
    result.phase_one_iterations = phase_one_iterations_;
    switch (p2) {
    case PhaseEnd::Optimal:
        result.status = LPStatus::Optimal;
        break;
    case PhaseEnd::Unbounded:
        result.status = LPStatus::Unbounded;
        return result;
    case PhaseEnd::IterationLimit:
        result.status = LPStatus::IterationLimit;
        return result;
    case PhaseEnd::Numerical:
        result.status = LPStatus::NumericalFailure;
        return result;
    }
    if (!restore()) {
        result.status = LPStatus::NumericalFailure;
        return result;
    }

    std::vector<double> zs(total_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t var = head_[r];
        if (!is_artificial(var)) {
            zs[var] = std::max(0.0, xb_[static_cast<Eigen::Index>(r)]);
            result.basis.push_back(var);
        }
    }
    std::sort(result.basis.begin(), result.basis.end());
    result.z.resize(n_);
    result.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        result.z[j] = zs[j] * col_scale_[j];
        result.objective += lp_.c[j] * result.z[j];
    }
    std::vector<double> y;
    compute_duals(y);
    result.dual.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        result.dual[i] = y[i] * row_scale_[i];
    }

    // Residuals in the caller's units.
    std::vector<double> az;
    double resid = 0.0;
    if (me_ > 0) {
        lp_.A.multiply(result.z, az);
        for (std::size_t i = 0; i < me_; ++i) {
            resid = std::max(resid, std::abs(az[i] - lp_.b[i]));
        }
    }
    if (mi_ > 0) {
        lp_.G.multiply(result.z, az);
        for (std::size_t i = 0; i < mi_; ++i) {
            resid = std::max(resid, az[i] - lp_.h[i]);
        }
    }
    result.primal_residual = resid;
    return result;
}

} // namespace

LPResult solve(const StandardLP& lp, const SolveOptions& options, std::span<const std::size_t> warm_basis) {
    lp.validate();
    RevisedSimplex solver(lp, options);
    LPResult result = solver.run(warm_basis);
    if (result.status != LPStatus::Optimal && options.perturbation > 0.0 &&
        result.status != LPStatus::Infeasible && result.status != LPStatus::Unbounded) {
        SolveOptions plain = options;
        plain.perturbation = 0.0;
        RevisedSimplex retry(lp, plain);
        LPResult second = retry.run({});
        second.iterations += result.iterations;
        second.phase_one_iterations += result.phase_one_iterations;
        return second;
    }
    return result;
}

} // namespace sscfem
