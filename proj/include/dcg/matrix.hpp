// matrix.hpp — Dense complex matrices for small Hilbert spaces (d <= 16)

#pragma once

#include <complex>
#include <cstddef>
#include <cmath>
#include <vector>

#include "dcg/errors.hpp"

namespace dcg {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Row-major dense complex matrix. Dimensionless entries unless stated;
// hbar = 1 throughout, energies and inverse times share units.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix from_rows(std::size_t rows, std::size_t cols,
                                   std::initializer_list<cplx> entries) {
        if (entries.size() != rows * cols)
            throw dimension_error("from_rows: entry count does not match shape");
        ComplexMatrix m(rows, cols);
        std::size_t k = 0;
        for (cplx v : entries) m.data_[k++] = v;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<cplx>& data() const noexcept { return data_; }
    std::vector<cplx>& data() noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw dimension_error("operator*: inner dimensions differ");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    ComplexMatrix dagger() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    cplx trace() const {
        if (!square()) throw dimension_error("trace: matrix not square");
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    // Max entrywise deviation from the own adjoint.
    double hermiticity_defect() const {
        if (!square()) throw dimension_error("hermiticity_defect: matrix not square");
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

  private:
    void check_same_shape(const ComplexMatrix& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw dimension_error(std::string(who) + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// Kronecker product with row-major block layout, so that
// vec(A rho B) = kron(A, B^T) vec(rho) under the row-major vec convention.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

// --------------------------- Standard operators -----------------------------

namespace ops {

inline ComplexMatrix sigma_x() { return ComplexMatrix::from_rows(2, 2, {0, 1, 1, 0}); }
inline ComplexMatrix sigma_y() {
    return ComplexMatrix::from_rows(2, 2, {0, cplx{0, -1}, cplx{0, 1}, 0});
}
inline ComplexMatrix sigma_z() { return ComplexMatrix::from_rows(2, 2, {1, 0, 0, -1}); }

// |a><b| on a d-dimensional space.
inline ComplexMatrix ketbra(std::size_t d, std::size_t a, std::size_t b) {
    ComplexMatrix m(d, d);
    m(a, b) = 1.0;
    return m;
}

} // namespace ops

} // namespace dcg
