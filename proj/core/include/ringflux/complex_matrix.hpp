#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ringflux {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
///
/// Sized for the small effective Hamiltonians of a scattering region
/// (up to a few hundred sites); there is no blocking or BLAS backend.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Complex> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    /// Largest |a_ij|.
    double max_abs() const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// max_ij |a_ij - b_ij|; matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Thrown when a factorization meets a (numerically) zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    /// Rough 1-norm condition estimate; +inf for an exactly zero pivot.
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// LU factorization with partial (row) pivoting: P·A = L·U.
///
/// L is unit lower triangular and U upper triangular; both are stored packed
/// in one matrix. The object is immutable once constructed and can be reused
/// for any number of solves.
class LuDecomposition {
public:
    /// Factorizes `a`. Throws std::invalid_argument for a non-square input and
    /// SingularMatrixError when a pivot falls below n·eps·max|a|.
    explicit LuDecomposition(ComplexMatrix a);

    std::size_t size() const noexcept { return packed_.rows(); }

    /// Solves A·x = b.
    std::vector<Complex> solve(std::span<const Complex> b) const;

    /// Solves A·X = B column by column.
    ComplexMatrix solve(const ComplexMatrix& b) const;

    /// Column j of A⁻¹.
    std::vector<Complex> inverse_column(std::size_t j) const;

    ComplexMatrix inverse() const;
    Complex determinant() const;

    ComplexMatrix lower() const;
    ComplexMatrix upper() const;
    /// Permutation matrix P with P·A = L·U.
    ComplexMatrix permutation() const;

    /// max|u_ii| / min|u_ii|, a cheap lower bound on the condition number.
    double pivot_growth() const;

private:
    ComplexMatrix packed_;
    std::vector<std::size_t> perm_;  // row i of P·A is row perm_[i] of A
    int sign_ = 1;
};

}  // namespace ringflux
