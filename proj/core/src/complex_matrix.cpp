#include "ringflux/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ringflux {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("matrix product: inner dimensions differ");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols_; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
}

}  // namespace

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "matrix difference");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] -= b.data_[i];
    }
    return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "matrix sum");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] += b.data_[i];
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

LuDecomposition::LuDecomposition(ComplexMatrix a) : packed_(std::move(a)) {
    if (!packed_.is_square()) {
        throw std::invalid_argument("LU factorization needs a square matrix");
    }
    const std::size_t n = packed_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    const double scale = packed_.max_abs();
    const double tiny = static_cast<double>(std::max<std::size_t>(n, 1)) *
                        std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot_abs = std::abs(packed_(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(packed_(r, col));
            if (v > pivot_abs) {
                pivot_abs = v;
                pivot_row = r;
            }
        }
        if (pivot_abs <= tiny || pivot_abs == 0.0) {
            const double cond = pivot_abs == 0.0 ? std::numeric_limits<double>::infinity()
                                                 : scale / pivot_abs;
            throw SingularMatrixError("singular matrix: pivot " + std::to_string(pivot_abs) +
                                          " in column " + std::to_string(col),
                                      cond);
        }
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(packed_(col, j), packed_(pivot_row, j));
            }
            std::swap(perm_[col], perm_[pivot_row]);
            sign_ = -sign_;
        }
        const Complex inv_pivot = 1.0 / packed_(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex factor = packed_(r, col) * inv_pivot;
            packed_(r, col) = factor;
            if (factor == Complex{}) {
                continue;
            }
            for (std::size_t j = col + 1; j < n; ++j) {
                packed_(r, j) -= factor * packed_(col, j);
            }
        }
    }
}

std::vector<Complex> LuDecomposition::solve(std::span<const Complex> b) const {
    const std::size_t n = size();
    if (b.size() != n) {
        throw std::invalid_argument("LU solve: right-hand side has wrong length");
    }
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) {
            s -= packed_(i, j) * x[j];
        }
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= packed_(i, j) * x[j];
        }
        x[i] = s / packed_(i, i);
    }
    return x;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& b) const {
    if (b.rows() != size()) {
        throw std::invalid_argument("LU solve: right-hand side has wrong row count");
    }
    ComplexMatrix out(b.rows(), b.cols());
    std::vector<Complex> column(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            column[i] = b(i, j);
        }
        const auto x = solve(column);
        for (std::size_t i = 0; i < b.rows(); ++i) {
            out(i, j) = x[i];
        }
    }
    return out;
}

std::vector<Complex> LuDecomposition::inverse_column(std::size_t j) const {
    std::vector<Complex> e(size());
    e.at(j) = 1.0;
    return solve(e);
}

ComplexMatrix LuDecomposition::inverse() const {
    return solve(ComplexMatrix::identity(size()));
}

Complex LuDecomposition::determinant() const {
    Complex det = static_cast<double>(sign_);
    for (std::size_t i = 0; i < size(); ++i) {
        det *= packed_(i, i);
    }
    return det;
}

ComplexMatrix LuDecomposition::lower() const {
    const std::size_t n = size();
    ComplexMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            l(i, j) = packed_(i, j);
        }
        l(i, i) = 1.0;
    }
    return l;
}

ComplexMatrix LuDecomposition::upper() const {
    const std::size_t n = size();
    ComplexMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            u(i, j) = packed_(i, j);
        }
    }
    return u;
}

ComplexMatrix LuDecomposition::permutation() const {
    const std::size_t n = size();
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, perm_[i]) = 1.0;
    }
    return p;
}

double LuDecomposition::pivot_growth() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double v = std::abs(packed_(i, i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return size() == 0 ? 1.0 : hi / lo;
}

}  // namespace ringflux
