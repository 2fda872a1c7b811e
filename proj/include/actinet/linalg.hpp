#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace actinet {

// Dense row-major matrix. Sized for the problems at hand (a few hundred
// parameters), so no blocking or external BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Solves A x = b for symmetric positive definite A via an in-place Cholesky
// factorization. A and b are destroyed; on success x is left in b.
// Returns false if a pivot is non-positive or non-finite, leaving the
// caller to treat the attempt as failed (the LM trainer responds by raising
// the damping factor).
bool cholesky_solve_in_place(Matrix& a, std::span<double> b);

} // namespace actinet
