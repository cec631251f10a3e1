#include "sscfem/sparse.hpp"

#include "sscfem/error.hpp"

namespace sscfem {

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense, double drop) {
    SparseMatrix m(static_cast<std::size_t>(dense.rows()));
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
        m.add_column();
        for (Eigen::Index i = 0; i < dense.rows(); ++i) {
            if (std::abs(dense(i, j)) > drop) {
                m.push(static_cast<std::uint32_t>(i), dense(i, j));
            }
        }
    }
    return m;
}

void SparseMatrix::reserve(std::size_t cols, std::size_t nnz) {
    col_start_.reserve(cols + 1);
    row_index_.reserve(nnz);
    values_.reserve(nnz);
}

std::size_t SparseMatrix::add_column() {
    col_start_.push_back(values_.size());
    return cols() - 1;
}

void SparseMatrix::push(std::uint32_t row, double value) {
    if (col_start_.size() < 2) {
        throw StateError("SparseMatrix::push before add_column");
    }
    if (row >= rows_) {
        throw InputError("SparseMatrix::push row out of range");
    }
    if (value == 0.0) {
        return;
    }
    row_index_.push_back(row);
    values_.push_back(value);
    col_start_.back() = values_.size();
}

void SparseMatrix::add_empty_columns(std::size_t count) {
    col_start_.insert(col_start_.end(), count, values_.size());
}

double SparseMatrix::coeff(std::size_t row, std::size_t col) const {
    double sum = 0.0;
    const auto r = column_rows(col);
    const auto v = column_values(col);
    for (std::size_t e = 0; e < r.size(); ++e) {
        if (r[e] == row) {
            sum += v[e];
        }
    }
    return sum;
}

double SparseMatrix::column_dot(std::size_t j, std::span<const double> y) const {
    double sum = 0.0;
    const std::size_t end = col_start_[j + 1];
    for (std::size_t e = col_start_[j]; e < end; ++e) {
        sum += values_[e] * y[row_index_[e]];
    }
    return sum;
}

void SparseMatrix::multiply(std::span<const double> x, std::vector<double>& out) const {
    out.assign(rows_, 0.0);
    for (std::size_t j = 0; j < cols(); ++j) {
        const double xj = x[j];
        if (xj == 0.0) {
            continue;
        }
        for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e) {
            out[row_index_[e]] += values_[e] * xj;
        }
    }
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
    for (std::size_t j = 0; j < cols(); ++j) {
        for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e) {
            d(row_index_[e], static_cast<Eigen::Index>(j)) += values_[e];
        }
    }
    return d;
}

void SparseMatrix::append_columns(const SparseMatrix& other) {
    if (other.rows_ != rows_) {
        throw InputError("append_columns: row count mismatch");
    }
    const std::size_t base = values_.size();
    for (std::size_t j = 0; j < other.cols(); ++j) {
        col_start_.push_back(base + other.col_start_[j + 1]);
    }
    row_index_.insert(row_index_.end(), other.row_index_.begin(), other.row_index_.end());
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
}

} // namespace sscfem
