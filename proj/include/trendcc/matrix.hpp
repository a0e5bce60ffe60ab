#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace trendcc {

/// Dense row-major matrix of doubles, sized for the small (<= 32) dimensions
/// this library works with.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    Matrix transposed() const;
    double trace() const noexcept;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Largest |a(i,j) - a(j,i)|.
double asymmetry(const Matrix& a) noexcept;

/// Lower-triangular L with L * L^T = a. Throws DecompositionError naming the
/// 1-based pivot when a pivot is not positive relative to its diagonal entry.
Matrix cholesky(const Matrix& a);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const Matrix& a);

} // namespace trendcc
