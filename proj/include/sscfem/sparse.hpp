#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sscfem {

/// Compressed sparse column matrix. Columns are appended in order; entries inside a column
/// keep insertion order.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t rows) : rows_(rows) {}

    static SparseMatrix from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return col_start_.size() - 1; }
    std::size_t nonzeros() const { return values_.size(); }

    void reserve(std::size_t cols, std::size_t nnz);

    /// Starts a new (empty) column and returns its index.
    std::size_t add_column();
    /// Appends an entry to the last column. Zeros are kept out.
    void push(std::uint32_t row, double value);
    void add_empty_columns(std::size_t count);

    std::span<const std::uint32_t> column_rows(std::size_t j) const {
        return {row_index_.data() + col_start_[j], col_start_[j + 1] - col_start_[j]};
    }
    std::span<const double> column_values(std::size_t j) const {
        return {values_.data() + col_start_[j], col_start_[j + 1] - col_start_[j]};
    }
    std::span<double> column_values(std::size_t j) {
        return {values_.data() + col_start_[j], col_start_[j + 1] - col_start_[j]};
    }

    double coeff(std::size_t row, std::size_t col) const;
    double column_dot(std::size_t j, std::span<const double> y) const;

    /// out = this * x (out resized to rows()).
    void multiply(std::span<const double> x, std::vector<double>& out) const;
    Eigen::MatrixXd to_dense() const;

    /// Appends the columns of `other` (same row count) after the existing ones.
    void append_columns(const SparseMatrix& other);

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::vector<std::size_t> col_start_{0};
    std::vector<std::uint32_t> row_index_;
    std::vector<double> values_;
};

} // namespace sscfem
